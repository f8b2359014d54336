#pragma once

// Command-line front end.  Each subcommand maps onto one operation family:
//
//   domain validate   parse a config file, echo the canonical form
//   jet normalize     run the normal-form pipeline on a jet literal
//   metric eval       one density value at one point
//   scan              densities along a boundary ray, CSV + report
//   compare           two metrics along the same ray
//   quotient-bounds   the 1 - S/K defect law
//   localize          gap against the domain with its hole removed
//   report            domain characterization summary
//
// Exit codes separate tooling problems from science: 0 success, 1 operational
// failure (unreadable config, solver refusal), 2 the command ran but a check
// missed its tolerance.  Artifact-writing commands drop CSV, report.txt,
// manifest.json and optionally an SVG into --out; the manifest hash covers
// the config bytes plus every numerically relevant flag, so equal hashes
// guarantee byte-identical CSV.

#include <metriclab/domain_spec.hpp>
#include <metriclab/experiments.hpp>
#include <metriclab/jet_io.hpp>
#include <metriclab/output.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace metriclab {
namespace detail {

struct CliOptions {
    std::string config;
    std::string jet_file;
    int nodes = 512;
    double delta_min = 1e-3;
    double delta_max = 1e-1;
    int grid = 24;
    double tol = -1.0;  // negative: use the command's default
    bool plot = false;
    std::string out_dir = ".";
    std::string ray = "outer:0";
    std::string rays = "auto";
    std::string kinds;  // default differs between scan and compare
    std::string kind = "kobayashi";
    std::string point = "0,0";
};

inline double cli_number(const std::string& text, const std::string& what) {
    std::istringstream is(text);
    double v = 0.0;
    if (is >> v) {
        is >> std::ws;
        if (is.eof()) return v;
    }
    throw std::invalid_argument("expected a number for the " + what + ", got '" + text + "'");
}

inline MetricKind parse_kind_checked(const std::string& name) {
    const auto k = parse_kind(name);
    if (!k)
        throw std::invalid_argument("unknown metric kind '" + name +
                                    "' (expected kobayashi, caratheodory, suita, or ball)");
    return *k;
}

inline std::vector<MetricKind> parse_kind_list(const std::string& list) {
    std::vector<MetricKind> kinds;
    std::istringstream is(list);
    std::string item;
    while (std::getline(is, item, ','))
        if (!trimmed(item).empty()) kinds.push_back(parse_kind_checked(trimmed(item)));
    if (kinds.empty()) throw std::invalid_argument("no metric kinds given");
    return kinds;
}

inline BoundaryPoint parse_ray_spec(const std::string& s) {
    const auto colon = s.find(':');
    const std::string comp = colon == std::string::npos ? s : trimmed(s.substr(0, colon));
    BoundaryPoint p;
    if (comp == "outer")
        p.which = Component::outer;
    else if (comp == "inner")
        p.which = Component::inner;
    else
        throw std::invalid_argument("a ray looks like 'outer:t' or 'inner:t', got '" + s + "'");
    p.t = colon == std::string::npos ? 0.0
                                     : cli_number(trimmed(s.substr(colon + 1)), "ray parameter");
    return p;
}

inline std::vector<BoundaryPoint> parse_ray_list(const std::string& list) {
    std::vector<BoundaryPoint> rays;
    std::istringstream is(list);
    std::string item;
    while (std::getline(is, item, ','))
        if (!trimmed(item).empty()) rays.push_back(parse_ray_spec(trimmed(item)));
    return rays;
}

inline Complex parse_point_spec(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--point expects \"re,im\", got '" + s + "'");
    return {cli_number(trimmed(s.substr(0, comma)), "point"),
            cli_number(trimmed(s.substr(comma + 1)), "point")};
}

inline std::string ray_canon(const BoundaryPoint& p) {
    return (p.which == Component::outer ? "outer:" : "inner:") + format_number(p.t);
}

inline void write_text_file(const std::filesystem::path& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << body;
}

inline const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

inline void report_line(std::ostream& os, const std::string& name, const std::string& value,
                        const std::string& note = "") {
    os << "  " << std::left << std::setw(16) << name << ' ' << value;
    if (!note.empty()) os << "   " << note;
    os << '\n';
}

// Bundles the bookkeeping every artifact-writing command repeats: create the
// output directory, fingerprint the run, stamp the wall time at the end.
struct RunScope {
    std::filesystem::path dir;
    RunManifest manifest;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    RunScope(const std::string& canonical, const std::string& payload, const CliOptions& o,
             std::map<std::string, double> tolerances) {
        dir = o.out_dir;
        std::filesystem::create_directories(dir);
        manifest.command = canonical;
        manifest.config_hash = fnv1a64(canonical + "\n" + payload);
        manifest.nodes = o.nodes;
        manifest.tolerances = std::move(tolerances);
    }

    void finish() {
        manifest.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
        std::ostringstream os;
        write_manifest(os, manifest);
        write_text_file(dir / "manifest.json", os.str());
    }
};

inline std::string window_canon(const CliOptions& o) {
    return " nodes=" + std::to_string(o.nodes) + " grid=" + std::to_string(o.grid) +
           " delta-min=" + format_number(o.delta_min) + " delta-max=" + format_number(o.delta_max);
}

// ---- subcommand bodies ----------------------------------------------------

inline int cmd_domain_validate(const CliOptions& o, std::ostream& out) {
    const ParsedConfig cfg = parse_config(o.config);
    out << "valid: " << (cfg.domain.doubly_connected() ? "doubly" : "simply")
        << " connected domain\n"
        << cfg.echo;
    return 0;
}

inline int cmd_jet_normalize(const CliOptions& o, std::ostream& out) {
    std::ifstream f(o.jet_file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open jet file '" + o.jet_file + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    std::istringstream is(buf.str());
    const RealJet jet = read_jet(is);
    const NormalFormReport rep =
        jet.dim() == 1 ? normalize_planar(jet) : normalize_scv(jet);

    RunScope scope("jet normalize", buf.str(), o, {});
    std::ostringstream body;
    write_jet(body, rep.final_jet);
    write_text_file(scope.dir / "normalized.jet", body.str());

    out << "== jet normalize ==\n";
    report_line(out, "dimension", std::to_string(jet.dim()));
    report_line(out, "steps", std::to_string(rep.steps.size()));
    report_line(out, "kappa", format_number(rep.kappa));
    if (jet.dim() == 1) {
        report_line(out, "quartic", format_number(rep.quartic));
    } else {
        report_line(out, "tau", format_number(rep.tau));
        std::string tt;
        for (const double v : rep.tau_tilde) tt += (tt.empty() ? "" : " ") + format_number(v);
        report_line(out, "tau_tilde", tt.empty() ? "-" : tt);
    }
    report_line(out, "wrote", (scope.dir / "normalized.jet").string());
    scope.finish();
    return 0;
}

inline int cmd_metric_eval(const CliOptions& o, std::ostream& out) {
    const ParsedConfig cfg = parse_config(o.config);
    const MetricKind kind = parse_kind_checked(o.kind);
    const Complex z = parse_point_spec(o.point);
    MetricSample sample;
    if (kind == MetricKind::BallKobayashi) {
        const auto form = disk_form(cfg.domain);
        if (!form || std::abs(form->radius - 1.0) > 1e-12 || std::abs(form->center) > 1e-12)
            throw std::invalid_argument(
                "ball samples are modeled on the unit-disk slice; use a unit disk domain");
        sample.kind = kind;
        sample.point = z;
        sample.value = ball_kobayashi(2, {z, 0.0}, {1.0, 0.0});
        sample.delta = 1.0 - std::abs(z);
    } else if (kind == MetricKind::Kobayashi) {
        sample = kobayashi(cfg.domain, z, o.nodes);
    } else if (kind == MetricKind::Caratheodory) {
        sample = caratheodory(cfg.domain, z, o.nodes);
    } else {
        sample = suita(cfg.domain, z, o.nodes);
    }
    out << kind_name(kind) << " at (" << format_number(z.real()) << ", "
        << format_number(z.imag()) << "): value " << format_number(sample.value) << ", delta "
        << format_number(sample.delta) << '\n';
    return 0;
}

inline int cmd_scan(const CliOptions& o, std::ostream& out, std::ostream& err) {
    const ParsedConfig cfg = parse_config(o.config);
    const std::vector<MetricKind> kinds =
        parse_kind_list(o.kinds.empty() ? "kobayashi" : o.kinds);
    const BoundaryPoint p = parse_ray_spec(o.ray);
    const double tol = o.tol > 0.0 ? o.tol : 5e-3;

    std::string kind_list;
    for (const MetricKind k : kinds)
        kind_list += (kind_list.empty() ? "" : ",") + std::string(kind_name(k));
    RunScope scope("scan kind=" + kind_list + " ray=" + ray_canon(p) + window_canon(o) +
                       " tol=" + format_number(tol),
                   cfg.raw, o, {{"c0", tol}});

    ScanConfig sc{cfg.domain, p, kinds, o.delta_min, o.delta_max, o.grid, std::nullopt, o.nodes};
    std::vector<std::string> warnings;
    const std::vector<MetricSample> samples = scan(sc, &warnings);
    for (const auto& w : warnings) err << w << '\n';
    const double kappa = boundary_curvature(cfg.domain, p);

    std::ostringstream csv;
    write_scan_csv(csv, samples, kappa);
    write_text_file(scope.dir / "scan.csv", csv.str());
    if (o.plot) {
        std::ostringstream svg;
        write_scan_svg(svg, samples, kappa, "scan " + kind_list);
        write_text_file(scope.dir / "scan.svg", svg.str());
    }

    std::ostringstream rep;
    rep << "== scan ==\n";
    report_line(rep, "ray", ray_canon(p));
    report_line(rep, "kappa", format_number(kappa));
    report_line(rep, "points", std::to_string(samples.size()));
    bool all_ok = true;
    for (const MetricKind k : kinds) {
        std::vector<MetricSample> sub;
        for (const auto& s : samples)
            if (s.kind == k) sub.push_back(s);
        const ExpansionFit fit = fit_expansion(sub, kappa);
        const bool ok = std::abs(fit.c0 - 0.25 * kappa) <= tol;
        all_ok = all_ok && ok;
        rep << "  -- " << kind_name(k) << " --\n";
        report_line(rep, "c0", format_number(fit.c0),
                    "target " + format_number(0.25 * kappa) + " +- " + format_number(tol) +
                        "  " + verdict(ok));
        report_line(rep, "c1", format_number(fit.c1));
        report_line(rep, "rms residual", format_number(fit.rms));
        report_line(rep, "residual slope", format_number(fit.slope));
    }
    report_line(rep, "verdict", verdict(all_ok));
    write_text_file(scope.dir / "report.txt", rep.str());
    scope.finish();
    out << rep.str();
    return all_ok ? 0 : 2;
}

inline int cmd_compare(const CliOptions& o, std::ostream& out) {
    const ParsedConfig cfg = parse_config(o.config);
    const std::vector<MetricKind> kinds =
        parse_kind_list(o.kinds.empty() ? "suita,kobayashi" : o.kinds);
    if (kinds.size() != 2)
        throw std::invalid_argument("compare needs exactly two kinds, e.g. --kinds "
                                    "suita,kobayashi");
    const BoundaryPoint p = parse_ray_spec(o.ray);
    const double ident_tol = o.tol > 0.0 ? o.tol : 1e-9;

    const std::string kind_list =
        std::string(kind_name(kinds[0])) + "," + kind_name(kinds[1]);
    RunScope scope("compare kinds=" + kind_list + " ray=" + ray_canon(p) + window_canon(o) +
                       " tol=" + format_number(ident_tol),
                   cfg.raw, o,
                   {{"identical", ident_tol}, {"difference_slope", 0.9}, {"quotient_slope", 1.9}});

    const ComparisonFit fit = comparison_gap(cfg.domain, p, kinds[0], kinds[1], o.delta_min,
                                             o.delta_max, o.grid, o.nodes);
    std::ostringstream csv;
    csv << "delta,difference,quotient_gap\n";
    for (std::size_t i = 0; i < fit.deltas.size(); ++i)
        csv << format_number(fit.deltas[i]) << ',' << format_number(fit.difference[i]) << ','
            << format_number(fit.quotient_gap[i]) << '\n';
    write_text_file(scope.dir / "compare.csv", csv.str());
    if (o.plot) {
        PlotSeries diff{"|F1 - F2|", {}, false}, quot{"|F1/F2 - 1|", {}, true};
        for (std::size_t i = 0; i < fit.deltas.size(); ++i) {
            diff.points.emplace_back(fit.deltas[i], std::abs(fit.difference[i]));
            quot.points.emplace_back(fit.deltas[i], std::abs(fit.quotient_gap[i]));
        }
        std::ostringstream svg;
        write_loglog_svg(svg, {diff, quot}, "compare " + kind_list, "delta", "gap");
        write_text_file(scope.dir / "compare.svg", svg.str());
    }

    const bool identical = fit.max_difference <= ident_tol;
    const bool slopes_ok = fit.difference_slope >= 0.9 && fit.quotient_slope >= 1.9;
    const bool ok = identical || slopes_ok;
    std::ostringstream rep;
    rep << "== compare " << kind_list << " ==\n";
    report_line(rep, "points", std::to_string(fit.deltas.size()));
    report_line(rep, "max |F1 - F2|", format_number(fit.max_difference),
                identical ? std::string("within ") + format_number(ident_tol) +
                                " (metrics coincide)  PASS"
                          : "");
    report_line(rep, "difference slope", format_number(fit.difference_slope),
                identical ? "" : std::string("target >= 0.9  ") +
                                     verdict(fit.difference_slope >= 0.9));
    report_line(rep, "quotient slope", format_number(fit.quotient_slope),
                identical ? "" : std::string("target >= 1.9  ") +
                                     verdict(fit.quotient_slope >= 1.9));
    report_line(rep, "verdict", verdict(ok));
    write_text_file(scope.dir / "report.txt", rep.str());
    scope.finish();
    out << rep.str();
    return ok ? 0 : 2;
}

inline int cmd_quotient_bounds(const CliOptions& o, std::ostream& out) {
    const ParsedConfig cfg = parse_config(o.config);
    std::vector<BoundaryPoint> rays;
    if (o.rays == "auto") {
        rays = {{Component::outer, 0.0}, {Component::outer, 0.5 * std::numbers::pi}};
        if (cfg.domain.doubly_connected()) rays.push_back({Component::inner, 0.0});
    } else {
        rays = parse_ray_list(o.rays);
        if (rays.empty()) throw std::invalid_argument("--rays lists at least one ray");
    }
    const bool doubly = cfg.domain.doubly_connected();
    const double tol = o.tol > 0.0 ? o.tol : (doubly ? 0.05 : 1e-8);

    std::string ray_list;
    for (const auto& p : rays) ray_list += (ray_list.empty() ? "" : ",") + ray_canon(p);
    RunScope scope("quotient-bounds rays=" + ray_list + window_canon(o) +
                       " tol=" + format_number(tol),
                   cfg.raw, o, {{doubly ? "exponent" : "defect", tol}});

    const QuotientFit fit =
        quotient_bounds(cfg.domain, rays, o.delta_min, o.delta_max, o.grid, o.nodes);
    std::ostringstream csv;
    csv << "delta,defect,ratio\n";
    for (std::size_t i = 0; i < fit.deltas.size(); ++i)
        csv << format_number(fit.deltas[i]) << ',' << format_number(fit.defects[i]) << ','
            << format_number(fit.ratios[i]) << '\n';
    write_text_file(scope.dir / "quotient.csv", csv.str());
    if (o.plot) {
        PlotSeries defect{"1 - S/K", {}, false};
        for (std::size_t i = 0; i < fit.deltas.size(); ++i)
            defect.points.emplace_back(fit.deltas[i], std::abs(fit.defects[i]));
        std::ostringstream svg;
        write_loglog_svg(svg, {defect}, "quotient defect", "delta", "1 - S/K");
        write_text_file(scope.dir / "quotient.svg", svg.str());
    }

    std::ostringstream rep;
    rep << "== quotient-bounds ==\n";
    report_line(rep, "rays", ray_list);
    report_line(rep, "points", std::to_string(fit.deltas.size()));
    bool ok = false;
    if (doubly) {
        const bool exp_ok = std::abs(fit.exponent - 2.0) <= tol;
        const bool lower_ok = fit.a_lower > 0.0;
        const bool upper_ok = std::isfinite(fit.a_upper);
        ok = exp_ok && lower_ok && upper_ok;
        report_line(rep, "exponent", format_number(fit.exponent),
                    "target 2 +- " + format_number(tol) + "  " + verdict(exp_ok));
        report_line(rep, "a_lower", format_number(fit.a_lower),
                    std::string("target > 0  ") + verdict(lower_ok));
        report_line(rep, "a_upper", format_number(fit.a_upper),
                    std::string("target finite  ") + verdict(upper_ok));
    } else {
        double max_defect = 0.0;
        for (const double d : fit.defects) max_defect = std::max(max_defect, std::abs(d));
        ok = max_defect <= tol;
        report_line(rep, "max defect", format_number(max_defect),
                    "target <= " + format_number(tol) + " (no deck contribution)  " +
                        verdict(ok));
    }
    report_line(rep, "verdict", verdict(ok));
    write_text_file(scope.dir / "report.txt", rep.str());
    scope.finish();
    out << rep.str();
    return ok ? 0 : 2;
}

inline int cmd_localize(const CliOptions& o, std::ostream& out) {
    const ParsedConfig cfg = parse_config(o.config);
    if (!cfg.domain.doubly_connected())
        throw std::invalid_argument(
            "localize needs an inner block: the config describes the domain with its hole, and "
            "the comparison removes it");
    const BoundaryPoint p = parse_ray_spec(o.ray);
    const PlanarDomain full(cfg.domain.outer());

    RunScope scope("localize ray=" + ray_canon(p) + window_canon(o), cfg.raw, o,
                   {{"slope", 0.9}});
    const LocalisationFit fit =
        localisation_check(full, cfg.domain, p, o.delta_min, o.delta_max, o.grid, o.nodes);

    std::ostringstream csv;
    csv << "delta,gap\n";
    for (std::size_t i = 0; i < fit.deltas.size(); ++i)
        csv << format_number(fit.deltas[i]) << ',' << format_number(fit.gaps[i]) << '\n';
    write_text_file(scope.dir / "localize.csv", csv.str());
    if (o.plot) {
        PlotSeries gap{"F_sub - F_full", {}, false};
        for (std::size_t i = 0; i < fit.deltas.size(); ++i)
            gap.points.emplace_back(fit.deltas[i], std::abs(fit.gaps[i]));
        std::ostringstream svg;
        write_loglog_svg(svg, {gap}, "localisation gap", "delta", "gap");
        write_text_file(scope.dir / "localize.svg", svg.str());
    }

    const bool nonneg = fit.min_gap >= -1e-12;
    const bool slope_ok = fit.slope >= 0.9 || fit.max_gap == 0.0;
    const bool ok = nonneg && slope_ok;
    std::ostringstream rep;
    rep << "== localize ==\n";
    report_line(rep, "points", std::to_string(fit.deltas.size()));
    report_line(rep, "min gap", format_number(fit.min_gap),
                std::string("target >= 0  ") + verdict(nonneg));
    report_line(rep, "max gap", format_number(fit.max_gap));
    report_line(rep, "gap slope", format_number(fit.slope),
                std::string("target >= 0.9  ") + verdict(slope_ok));
    report_line(rep, "verdict", verdict(ok));
    write_text_file(scope.dir / "report.txt", rep.str());
    scope.finish();
    out << rep.str();
    return ok ? 0 : 2;
}

inline int cmd_report(const CliOptions& o, std::ostream& out) {
    const ParsedConfig cfg = parse_config(o.config);
    RunScope scope("report nodes=" + std::to_string(o.nodes), cfg.raw, o, {});
    const CharacterizationReport rep = characterization_report(cfg.domain, o.nodes);

    std::ostringstream body;
    body << "== report ==\n";
    report_line(body, "connectivity", rep.doubly_connected ? "doubly" : "simply");
    report_line(body, "max defect", format_number(rep.max_defect));
    if (rep.defect_law) {
        report_line(body, "exponent", format_number(rep.defect_law->exponent));
        report_line(body, "a_lower", format_number(rep.defect_law->a_lower));
        report_line(body, "a_upper", format_number(rep.defect_law->a_upper));
    }
    report_line(body, "classification", rep.classification);
    report_line(body, "squeezing", rep.squeezing);
    write_text_file(scope.dir / "report.txt", body.str());
    scope.finish();
    out << body.str();
    return 0;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    detail::CliOptions o;
    CLI::App app{"numerical laboratory for invariant metrics on planar domains", "mlab"};
    app.require_subcommand(1);

    auto add_solver = [&](CLI::App* c) {
        c->add_option("--nodes", o.nodes, "boundary quadrature nodes")->capture_default_str();
    };
    auto add_window = [&](CLI::App* c) {
        c->add_option("--delta-min", o.delta_min, "closest approach distance")
            ->capture_default_str();
        c->add_option("--delta-max", o.delta_max, "farthest approach distance")
            ->capture_default_str();
        c->add_option("--grid", o.grid, "points on the log grid")->capture_default_str();
    };
    auto add_artifacts = [&](CLI::App* c) {
        c->add_option("--tol", o.tol, "override the check tolerance");
        c->add_option("--out", o.out_dir, "artifact directory")->capture_default_str();
        c->add_flag("--plot", o.plot, "also write an SVG view");
    };

    auto* domain = app.add_subcommand("domain", "domain config operations");
    domain->require_subcommand(1);
    auto* validate =
        domain->add_subcommand("validate", "parse a config and echo the canonical form");
    validate->add_option("config", o.config, "domain config file")->required();

    auto* jet = app.add_subcommand("jet", "jet normal-form operations");
    jet->require_subcommand(1);
    auto* normalize = jet->add_subcommand("normalize", "bring a jet literal to normal form");
    normalize->add_option("jet", o.jet_file, "jet literal file")->required();
    normalize->add_option("--out", o.out_dir, "artifact directory")->capture_default_str();

    auto* metric = app.add_subcommand("metric", "pointwise metric values");
    metric->require_subcommand(1);
    auto* eval = metric->add_subcommand("eval", "evaluate one density");
    eval->add_option("config", o.config, "domain config file")->required();
    eval->add_option("--kind", o.kind, "kobayashi | caratheodory | suita | ball")
        ->capture_default_str();
    eval->add_option("--point", o.point, "evaluation point \"re,im\"")->capture_default_str();
    add_solver(eval);

    auto* scan_cmd = app.add_subcommand("scan", "densities along a boundary ray");
    scan_cmd->add_option("config", o.config, "domain config file")->required();
    scan_cmd->add_option("--kind", o.kinds, "comma-separated metric kinds (default kobayashi)");
    scan_cmd->add_option("--ray", o.ray, "base point 'outer:t' or 'inner:t'")
        ->capture_default_str();
    add_solver(scan_cmd);
    add_window(scan_cmd);
    add_artifacts(scan_cmd);

    auto* compare_cmd = app.add_subcommand("compare", "two metrics along one ray");
    compare_cmd->add_option("config", o.config, "domain config file")->required();
    compare_cmd->add_option("--kinds", o.kinds, "two kinds (default suita,kobayashi)");
    compare_cmd->add_option("--ray", o.ray, "base point 'outer:t' or 'inner:t'")
        ->capture_default_str();
    add_solver(compare_cmd);
    add_window(compare_cmd);
    add_artifacts(compare_cmd);

    auto* quotient_cmd = app.add_subcommand("quotient-bounds", "the 1 - S/K defect law");
    quotient_cmd->add_option("config", o.config, "domain config file")->required();
    quotient_cmd->add_option("--rays", o.rays, "comma-separated rays (default per domain)")
        ->capture_default_str();
    add_solver(quotient_cmd);
    add_window(quotient_cmd);
    add_artifacts(quotient_cmd);

    auto* localize_cmd =
        app.add_subcommand("localize", "gap against the domain with its hole removed");
    localize_cmd->add_option("config", o.config, "domain config file (needs an inner block)")
        ->required();
    localize_cmd->add_option("--ray", o.ray, "base point 'outer:t'")->capture_default_str();
    add_solver(localize_cmd);
    add_window(localize_cmd);
    add_artifacts(localize_cmd);

    auto* report_cmd = app.add_subcommand("report", "domain characterization summary");
    report_cmd->add_option("config", o.config, "domain config file")->required();
    add_solver(report_cmd);
    report_cmd->add_option("--out", o.out_dir, "artifact directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) return detail::cmd_domain_validate(o, out);
        if (normalize->parsed()) return detail::cmd_jet_normalize(o, out);
        if (eval->parsed()) return detail::cmd_metric_eval(o, out);
        if (scan_cmd->parsed()) return detail::cmd_scan(o, out, err);
        if (compare_cmd->parsed()) return detail::cmd_compare(o, out);
        if (quotient_cmd->parsed()) return detail::cmd_quotient_bounds(o, out);
        if (localize_cmd->parsed()) return detail::cmd_localize(o, out);
        if (report_cmd->parsed()) return detail::cmd_report(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: no command selected\n";
    return 1;
}

}  // namespace metriclab
