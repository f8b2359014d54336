#pragma once

// Harmonic machinery on smooth planar domains.
//
// The Dirichlet problem is solved with a double-layer potential, discretized
// by the Nystrom method on the periodic trapezoid rule.  The curves are
// analytic, so the kernel is analytic and the discretization converges
// spectrally.  A doubly connected domain gets one auxiliary log source
// placed inside the hole; the rank-one coupling below restores
// invertibility of the layer representation and the source strength carries
// the multivalued part of harmonic conjugates.
//
// Each solved field is post-processed once into the boundary values of its
// single-valued holomorphic completion (principal-value Cauchy sums plus the
// jump relation).  Interior and near-boundary evaluation then go through
// compensated barycentric Cauchy sums, which keep full accuracy arbitrarily
// close to, and on, the boundary.  Plain value() queries still refuse points
// within two node spacings of the boundary: metric code that needs values
// there is expected to route through conformal charts, and code that needs
// boundary limits uses boundary_value().

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <metriclab/geometry.hpp>

namespace metriclab {

namespace detail {

// derivative of a 2pi-periodic grid function through its trigonometric
// interpolant (even node count assumed)
inline std::vector<Complex> trig_derivative(const std::vector<Complex>& f) {
    const int n = static_cast<int>(f.size());
    const double h = 2.0 * std::numbers::pi / n;
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
            acc += (0.5 * sign / std::tan(0.5 * h * (i - j))) * f[j];
        }
        out[i] = acc;
    }
    return out;
}

// quadrature nodes and curve derivatives for one boundary component
struct NodeSet {
    double h = 0.0;
    std::vector<double> t;
    std::vector<Complex> pos, d1, d2;
};

inline NodeSet make_nodes(const BoundaryCurve& c, int n) {
    NodeSet s;
    s.h = 2.0 * std::numbers::pi / n;
    s.t.resize(n);
    s.pos.resize(n);
    s.d1.resize(n);
    s.d2.resize(n);
    for (int j = 0; j < n; ++j) {
        s.t[j] = s.h * j;
        s.pos[j] = c.eval(s.t[j]);
        s.d1[j] = c.derivative(s.t[j], 1);
        s.d2[j] = c.derivative(s.t[j], 2);
    }
    return s;
}

struct SolverCore {
    PlanarDomain domain;
    int n;                        // nodes per curve
    std::vector<NodeSet> grids;   // outer first, then inner if present
    Complex log_center;           // a point inside the hole (doubly connected)
    std::vector<double> log_weights;  // functional giving the source strength
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;

    explicit SolverCore(const PlanarDomain& d, int nodes) : domain(d), n(nodes) {
        grids.push_back(make_nodes(d.outer(), n));
        if (d.doubly_connected()) {
            grids.push_back(make_nodes(*d.inner(), n));
            log_center = d.inner()->coefficient(0);
        }
        const int total = n * static_cast<int>(grids.size());
        log_weights.assign(total, 0.0);
        if (d.doubly_connected())
            for (int j = 0; j < n; ++j)
                log_weights[n + j] =
                    grids[1].h * std::abs(grids[1].d1[j]) / (2.0 * std::numbers::pi);

        Eigen::MatrixXd m(total, total);
        for (int i = 0; i < total; ++i) {
            const NodeSet& gi = grids[i / n];
            const Complex xi = gi.pos[i % n];
            for (int j = 0; j < total; ++j) {
                const NodeSet& gj = grids[j / n];
                double k;
                if (i == j)
                    k = gi.h / (2.0 * std::numbers::pi) *
                        (gi.d2[i % n] / (2.0 * gi.d1[i % n])).imag();
                else
                    k = gj.h / (2.0 * std::numbers::pi) *
                        (gj.d1[j % n] / (gj.pos[j % n] - xi)).imag();
                m(i, j) = (i == j ? 0.5 : 0.0) + k;
                if (log_weights[j] != 0.0)
                    m(i, j) += log_weights[j] * std::log(std::abs(xi - log_center));
            }
        }
        lu.compute(m);
    }

    int total() const { return n * static_cast<int>(grids.size()); }

    // true when z keeps the requested number of node spacings between itself
    // and every boundary component
    bool clear_of_boundary(Complex z, double spacings) const {
        for (std::size_t g = 0; g < grids.size(); ++g) {
            const BoundaryCurve& c =
                domain.curve(g == 0 ? Component::outer : Component::inner);
            const double t = foot_parameter(c, z);
            const double dist = std::abs(c.eval(t) - z);
            if (dist < spacings * grids[g].h * std::abs(c.derivative(t, 1)))
                return false;
        }
        return true;
    }
};

// Cauchy integral over a curve enclosing z, in the compensated barycentric
// form.  data must hold the boundary values of a function holomorphic inside
// the curve; the quotient then stays accurate up to and on the curve.
inline Complex cauchy_enclosing(const NodeSet& g, const std::vector<Complex>& data,
                                Complex z) {
    const int n = static_cast<int>(data.size());
    Complex num(0.0, 0.0), den(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
        const Complex d = g.pos[j] - z;
        if (std::abs(d) < 1e-13 * (1.0 + std::abs(z))) return data[j];
        const Complex w = g.h * g.d1[j] / d;
        num += w * data[j];
        den += w;
    }
    return num / den;
}

// Exterior counterpart for the inner curve (stored clockwise, so the plain
// Cauchy sum already reproduces exterior values).  The compensating factor
// uses the known exterior function 1/(z - pole) with the pole in the hole.
inline Complex cauchy_excluding(const NodeSet& g, const std::vector<Complex>& data,
                                Complex z, Complex pole) {
    const int n = static_cast<int>(data.size());
    Complex num(0.0, 0.0), den(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
        const Complex d = g.pos[j] - z;
        if (std::abs(d) < 1e-13 * (1.0 + std::abs(z))) return data[j];
        const Complex w = g.h * g.d1[j] / d;
        num += w * data[j];
        den += w / (g.pos[j] - pole);
    }
    return num / (den * (z - pole));
}

}  // namespace detail

// A harmonic function produced by the solver: the double-layer density, the
// strength of the log source, and the boundary values of the single-valued
// holomorphic completion together with their tangential derivatives.
class HarmonicField {
  public:
    HarmonicField(std::shared_ptr<const detail::SolverCore> core,
                  Eigen::VectorXd density, double strength,
                  std::vector<std::vector<Complex>> boundary,
                  std::vector<std::vector<Complex>> boundary_deriv)
        : core_(std::move(core)),
          density_(std::move(density)),
          strength_(strength),
          bv_(std::move(boundary)),
          dbv_(std::move(boundary_deriv)) {}

    const PlanarDomain& domain() const { return core_->domain; }
    double strength() const { return strength_; }

    // single-valued holomorphic completion F with u = Re F + strength*log|z-c|
    Complex completion_value(Complex z) const {
        Complex f = detail::cauchy_enclosing(core_->grids[0], bv_[0], z);
        if (core_->grids.size() > 1)
            f += detail::cauchy_excluding(core_->grids[1], bv_[1], z, core_->log_center);
        return f;
    }

    Complex completion_derivative(Complex z) const {
        Complex f = detail::cauchy_enclosing(core_->grids[0], dbv_[0], z);
        if (core_->grids.size() > 1)
            f += detail::cauchy_excluding(core_->grids[1], dbv_[1], z, core_->log_center);
        return f;
    }

    double value(Complex z) const {
        if (!core_->domain.contains(z))
            throw std::invalid_argument("harmonic field queried outside the domain");
        if (!core_->clear_of_boundary(z, 2.0))
            throw std::runtime_error(
                "evaluation point within two node spacings of the boundary; "
                "use boundary_value or evaluate through a chart");
        return unguarded_value(z);
    }

    double boundary_value(const BoundaryPoint& p) const {
        return unguarded_value(boundary_position(core_->domain, p));
    }

  private:
    double unguarded_value(Complex z) const {
        double u = completion_value(z).real();
        if (core_->grids.size() > 1)
            u += strength_ * std::log(std::abs(z - core_->log_center));
        return u;
    }

    std::shared_ptr<const detail::SolverCore> core_;
    Eigen::VectorXd density_;
    double strength_;
    std::vector<std::vector<Complex>> bv_, dbv_;
};

class DirichletSolver {
  public:
    DirichletSolver(const PlanarDomain& d, int nodes = 512) {
        if (nodes < 64 || (nodes & (nodes - 1)) != 0)
            throw std::invalid_argument(
                "node count must be a power of two, at least 64 (got " +
                std::to_string(nodes) + ")");
        core_ = std::make_shared<const detail::SolverCore>(d, nodes);
        run_consistency_check();
    }

    const PlanarDomain& domain() const { return core_->domain; }
    int nodes() const { return core_->n; }
    double consistency_residual() const { return residual_; }

    // data sampled at the quadrature nodes, outer curve first
    HarmonicField solve(const Eigen::VectorXd& data) const {
        if (data.size() != core_->total())
            throw std::invalid_argument("boundary data has the wrong length");
        const Eigen::VectorXd rho = core_->lu.solve(data);
        double strength = 0.0;
        for (int j = 0; j < core_->total(); ++j)
            strength += core_->log_weights[j] * rho[j];

        // boundary values of the holomorphic completion, one block per curve:
        // principal value by singularity subtraction, then the domain-side
        // jump.  The enclosing curve keeps a full density jump, the excluded
        // one none, because the domain lies on opposite sides of them.
        std::vector<std::vector<Complex>> bv, dbv;
        for (std::size_t g = 0; g < core_->grids.size(); ++g) {
            const detail::NodeSet& grid = core_->grids[g];
            const int n = core_->n;
            std::vector<Complex> rc(n);
            for (int j = 0; j < n; ++j) rc[j] = rho[static_cast<int>(g) * n + j];
            const std::vector<Complex> rd = detail::trig_derivative(rc);
            std::vector<Complex> values(n);
            const Complex inv2pii(0.0, -1.0 / (2.0 * std::numbers::pi));
            for (int i = 0; i < n; ++i) {
                Complex acc = rd[i];
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    acc += (rc[j] - rc[i]) * grid.d1[j] / (grid.pos[j] - grid.pos[i]);
                }
                values[i] = grid.h * inv2pii * acc + (g == 0 ? rc[i] : 0.0);
            }
            std::vector<Complex> deriv = detail::trig_derivative(values);
            for (int i = 0; i < n; ++i) deriv[i] /= grid.d1[i];
            bv.push_back(std::move(values));
            dbv.push_back(std::move(deriv));
        }
        return HarmonicField(core_, rho, strength, std::move(bv), std::move(dbv));
    }

    HarmonicField solve(const std::function<double(Component, Complex)>& data) const {
        Eigen::VectorXd v(core_->total());
        for (std::size_t g = 0; g < core_->grids.size(); ++g) {
            const Component which = g == 0 ? Component::outer : Component::inner;
            for (int j = 0; j < core_->n; ++j)
                v[static_cast<int>(g) * core_->n + j] = data(which, core_->grids[g].pos[j]);
        }
        return solve(v);
    }

  private:
    void run_consistency_check() {
        const HarmonicField one = solve([](Component, Complex) { return 1.0; });
        double res = 0.0;
        for (std::size_t g = 0; g < core_->grids.size(); ++g) {
            const Component which = g == 0 ? Component::outer : Component::inner;
            const double h = core_->grids[g].h;
            for (int k = 0; k < 4; ++k) {
                const double t = 2.0 * std::numbers::pi * (k + 0.5) / 4.0;
                const BoundaryPoint p{which, t};
                const Complex nu = outward_normal(core_->domain, p);
                const double speed = std::abs(core_->domain.curve(which).derivative(t, 1));
                for (const double pull : {3.0, 8.0}) {
                    const Complex z = boundary_position(core_->domain, p) -
                                      pull * h * speed * nu;
                    if (!core_->domain.contains(z)) continue;
                    res = std::max(res, std::abs(one.value(z) - 1.0));
                }
            }
        }
        if (res > 1e-10)
            throw std::runtime_error(
                "Dirichlet solver failed its constant-data consistency check "
                "(residual " + std::to_string(res) + ")");
        residual_ = res;
    }

    std::shared_ptr<const detail::SolverCore> core_;
    double residual_ = 0.0;
};

inline DirichletSolver build_solver(const PlanarDomain& d, int nodes = 512) {
    return DirichletSolver(d, nodes);
}

// ---- Green's functions ----

struct GreenFunction {
    Complex pole;
    HarmonicField regular;  // the harmonic part, data -log|x - pole|
    double robin;           // regular part evaluated at the pole

    double value(Complex z) const {
        return regular.value(z) + std::log(std::abs(z - pole));
    }
    double boundary_value(const BoundaryPoint& p) const {
        return regular.boundary_value(p) +
               std::log(std::abs(boundary_position(regular.domain(), p) - pole));
    }
};

inline GreenFunction greens(const DirichletSolver& s, Complex a) {
    if (!s.domain().contains(a))
        throw std::invalid_argument("greens: pole must lie inside the domain");
    HarmonicField h = s.solve([a](Component, Complex z) {
        return -std::log(std::abs(z - a));
    });
    double robin;
    try {
        robin = h.value(a);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument(
            "greens: pole within two node spacings of the boundary; "
            "increase the node count");
    }
    return GreenFunction{a, std::move(h), robin};
}

inline double robin_constant(const GreenFunction& g) { return g.robin; }

// ---- conformal modulus ----

// q of the equivalent model annulus {q < |w| < 1}.  The harmonic measure of
// the inner boundary is u = Re(single-valued) + A log|z - c|; its conjugate
// picks up a period 2*pi*A around the hole, and q = exp(1/A).
inline double modulus(const DirichletSolver& s) {
    if (!s.domain().doubly_connected())
        throw std::invalid_argument("modulus requires a doubly connected domain");
    const HarmonicField u = s.solve([](Component which, Complex) {
        return which == Component::inner ? 1.0 : 0.0;
    });
    const double a = u.strength();
    const double q = std::exp(1.0 / a);
    if (!(a < 0.0) || !(q > 0.0 && q < 1.0))
        throw std::runtime_error("modulus: harmonic measure produced an invalid period");
    return q;
}

// ---- uniformizing maps ----

class DiskChart {
  public:
    DiskChart(Complex center, HarmonicField regular, double phase)
        : center_(center), regular_(std::move(regular)), phase_(phase) {}

    Complex center() const { return center_; }

    Complex map(Complex z) const {
        const Complex h = regular_.completion_value(z);
        return (z - center_) * std::exp(h - Complex(0.0, phase_));
    }

    Complex derivative(Complex z) const {
        const Complex h = regular_.completion_value(z);
        const Complex dh = regular_.completion_derivative(z);
        return std::exp(h - Complex(0.0, phase_)) * (1.0 + (z - center_) * dh);
    }

  private:
    Complex center_;
    HarmonicField regular_;
    double phase_;
};

inline DiskChart riemann_map(const DirichletSolver& s, Complex a) {
    if (s.domain().doubly_connected())
        throw std::invalid_argument(
            "riemann_map: conjugate period around the hole is nonzero; "
            "the domain must be simply connected");
    GreenFunction g = greens(s, a);
    const double phase = g.regular.completion_value(a).imag();
    DiskChart chart(a, std::move(g.regular), phase);
    double res = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double t = 2.0 * std::numbers::pi * (k + 0.37) / 16.0;
        const Complex w = chart.map(s.domain().outer().eval(t));
        res = std::max(res, std::abs(std::abs(w) - 1.0));
    }
    if (res > 1e-8)
        throw std::runtime_error("disk chart failed its boundary check (residual " +
                                 std::to_string(res) + ")");
    return chart;
}

class AnnulusChart {
  public:
    AnnulusChart(double q, Complex log_center, HarmonicField field, double exponent)
        : q_(q), center_(log_center), field_(std::move(field)), exponent_(exponent) {}

    double q() const { return q_; }
    const PlanarDomain& domain() const { return field_.domain(); }

    Complex map(Complex z) const {
        return (z - center_) * std::exp(exponent_ * field_.completion_value(z));
    }

    Complex derivative(Complex z) const {
        return map(z) * (1.0 / (z - center_) +
                         exponent_ * field_.completion_derivative(z));
    }

    Complex inverse(Complex w) const {
        const PlanarDomain& d = field_.domain();
        const BoundaryCurve& outer = d.outer();
        const BoundaryCurve& inner = *d.inner();
        Complex z(0.0, 0.0);
        double best = std::numeric_limits<double>::max();
        for (int i = 0; i < 24; ++i) {
            const double t = 2.0 * std::numbers::pi * (i + 0.5) / 24.0;
            for (const double s : {0.15, 0.35, 0.5, 0.65, 0.85}) {
                const Complex cand = (1.0 - s) * outer.eval(t) + s * inner.eval(t);
                if (!d.contains(cand)) continue;
                const double r = std::abs(map(cand) - w);
                if (r < best) {
                    best = r;
                    z = cand;
                }
            }
        }
        for (int iter = 0; iter < 60 && best > 1e-13; ++iter) {
            const Complex step = (map(z) - w) / derivative(z);
            bool improved = false;
            double lambda = 1.0;
            for (int half = 0; half < 30; ++half, lambda *= 0.5) {
                const Complex zn = z - lambda * step;
                if (!d.contains(zn)) continue;
                const double r = std::abs(map(zn) - w);
                if (r < best) {
                    best = r;
                    z = zn;
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        if (best > 1e-10)
            throw std::runtime_error(
                "annulus chart inverse failed to converge (residual " +
                std::to_string(best) + ")");
        return z;
    }

  private:
    double q_;
    Complex center_;
    HarmonicField field_;
    double exponent_;
};

inline AnnulusChart annulus_uniformize(const DirichletSolver& s) {
    if (!s.domain().doubly_connected())
        throw std::invalid_argument("annulus_uniformize requires a doubly connected domain");
    HarmonicField u = s.solve([](Component which, Complex) {
        return which == Component::inner ? 1.0 : 0.0;
    });
    const double a = u.strength();
    const double q = std::exp(1.0 / a);
    if (!(a < 0.0) || !(q > 0.0 && q < 1.0))
        throw std::runtime_error("modulus: harmonic measure produced an invalid period");
    // map = (z - c) exp((1/A) F_sv): the log factor enters with exponent
    // exactly one, so the map is single-valued by construction
    const Complex center = s.domain().inner()->coefficient(0);
    AnnulusChart chart(q, center, std::move(u), 1.0 / a);
    double res = 0.0;
    for (int k = 0; k < 12; ++k) {
        const double t = 2.0 * std::numbers::pi * (k + 0.41) / 12.0;
        res = std::max(res, std::abs(std::abs(chart.map(s.domain().outer().eval(t))) - 1.0));
        res = std::max(res, std::abs(std::abs(chart.map(s.domain().inner()->eval(t))) - q));
    }
    if (res > 1e-8)
        throw std::runtime_error("annulus chart failed its boundary check (residual " +
                                 std::to_string(res) + ")");
    return chart;
}

}  // namespace metriclab
