#pragma once

// Artifact plumbing for the command-line front end: a manifest that
// fingerprints each run, and a small log-log SVG plotter.  CSV emission lives
// with the experiments (write_scan_csv); this header only adds what the tools
// need around it.

#include <metriclab/experiments.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace metriclab {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

// Written next to every artifact.  The hash covers the raw config bytes plus
// the numerically relevant flags, so equal hashes promise byte-identical CSV;
// wall time is informational and deliberately outside the hash.
struct RunManifest {
    std::string command;
    std::uint64_t config_hash = 0;
    int nodes = 0;
    std::map<std::string, double> tolerances;
    std::string library = "metriclab 1.0.0";
    std::string compiler = __VERSION__;
    double wall_ms = 0.0;
};

inline void write_manifest(std::ostream& out, const RunManifest& m) {
    nlohmann::json j;
    j["command"] = m.command;
    j["config_hash"] = hash_hex(m.config_hash);
    j["nodes"] = m.nodes;
    j["tolerances"] = m.tolerances;
    j["versions"] = {{"library", m.library}, {"compiler", m.compiler}};
    j["wall_ms"] = m.wall_ms;
    out << j.dump(2) << '\n';
}

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), both > 0 to appear
    bool dashed = false;
};

namespace detail {

inline std::string svg_color(std::size_t i) {
    static const char* palette[] = {"#1f6fb4", "#d62728", "#2ca02c", "#9467bd",
                                    "#8c564b", "#e377c2"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

}  // namespace detail

// Log-log polyline chart.  Hand-rolled on purpose: the figures are
// display-only, so decade ticks and a legend are all that is needed.
inline void write_loglog_svg(std::ostream& out, const std::vector<PlotSeries>& series,
                             const std::string& title, const std::string& xlabel,
                             const std::string& ylabel) {
    constexpr double W = 640, H = 420, L = 70, R = 20, T = 34, B = 48;
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    bool any = false;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0) || !(y > 0.0)) continue;
            const double lx = std::log10(x), ly = std::log10(y);
            if (!any) {
                xlo = xhi = lx;
                ylo = yhi = ly;
                any = true;
            } else {
                xlo = std::min(xlo, lx);
                xhi = std::max(xhi, lx);
                ylo = std::min(ylo, ly);
                yhi = std::max(yhi, ly);
            }
        }
    if (!any) {
        xlo = ylo = -1;
        xhi = yhi = 1;
    }
    if (xhi - xlo < 1e-9) {
        xlo -= 0.5;
        xhi += 0.5;
    }
    if (yhi - ylo < 1e-9) {
        ylo -= 0.5;
        yhi += 0.5;
    }
    const double xpad = 0.04 * (xhi - xlo), ypad = 0.06 * (yhi - ylo);
    xlo -= xpad;
    xhi += xpad;
    ylo -= ypad;
    yhi += ypad;
    auto px = [&](double lx) { return L + (lx - xlo) / (xhi - xlo) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - ylo) / (yhi - ylo) * (H - T - B); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
        << H - T - B << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << (L + (W - L - R) / 2) << "\" y=\"18\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

    out << std::fixed << std::setprecision(2);
    for (int e = static_cast<int>(std::ceil(xlo)); e <= static_cast<int>(std::floor(xhi)); ++e) {
        const double x = px(e);
        out << "<line x1=\"" << x << "\" y1=\"" << T << "\" x2=\"" << x << "\" y2=\"" << H - B
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << H - B + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
            << "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(ylo)); e <= static_cast<int>(std::floor(yhi)); ++e) {
        const double y = py(e);
        out << "<line x1=\"" << L << "\" y1=\"" << y << "\" x2=\"" << W - R << "\" y2=\"" << y
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << e
            << "</text>\n";
    }
    out << "<text x=\"" << (L + (W - L - R) / 2) << "\" y=\"" << H - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << (T + (H - T - B) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << (T + (H - T - B) / 2) << ")\">" << ylabel
        << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        std::ostringstream pts;
        pts << std::fixed << std::setprecision(2);
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0) || !(y > 0.0)) continue;
            pts << px(std::log10(x)) << ',' << py(std::log10(y)) << ' ';
        }
        if (pts.str().empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << detail::svg_color(i) << "\" "
            << (s.dashed ? "stroke-dasharray=\"5 4\" " : "") << "points=\"" << pts.str()
            << "\"/>\n";
        const double ly = T + 16 + 16.0 * static_cast<double>(i);
        out << "<line x1=\"" << L + 8 << "\" y1=\"" << ly - 4 << "\" x2=\"" << L + 34
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << detail::svg_color(i) << "\""
            << (s.dashed ? " stroke-dasharray=\"5 4\"" : "") << "/>\n";
        out << "<text x=\"" << L + 40 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

// Scan view: density per kind plus its |residual| after removing the leading
// 1/(2 delta) + kappa/4 term, dashed in the matching slot of the palette.
inline void write_scan_svg(std::ostream& out, const std::vector<MetricSample>& samples,
                           double kappa, const std::string& title) {
    std::map<MetricKind, PlotSeries> values, residuals;
    for (const auto& s : samples) {
        auto& v = values[s.kind];
        v.label = std::string(kind_name(s.kind));
        v.points.emplace_back(s.delta, s.value);
        const double leading = 0.5 / s.delta + 0.25 * kappa;
        auto& r = residuals[s.kind];
        r.label = std::string(kind_name(s.kind)) + " |residual|";
        r.dashed = true;
        r.points.emplace_back(s.delta, std::abs(s.value - leading));
    }
    std::vector<PlotSeries> series;
    for (auto& [k, s] : values) series.push_back(std::move(s));
    for (auto& [k, s] : residuals) series.push_back(std::move(s));
    write_loglog_svg(out, series, title, "delta", "density");
}

}  // namespace metriclab
