#pragma once

// Planar domains bounded by truncated Fourier curves: one outer boundary
// and at most one inner boundary (doubly connected ceiling).  Curves are
// stored with the domain on the left, so the outer curve runs
// counterclockwise and an inner curve runs clockwise.  That makes the
// outward normal -i gamma'/|gamma'| and the outward-signed curvature
// Im(conj(gamma') gamma'') / |gamma'|^3 uniform across components; on the
// inner circle of an annulus {q<|z|<1} the latter gives -1/q, negative
// because the domain fails to be convex there.

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jets.hpp"

namespace metriclab {

// ---- boundary curves ----

class BoundaryCurve {
public:
    explicit BoundaryCurve(const std::map<int, Complex>& fourier) {
        int m = 0;
        for (const auto& [k, c] : fourier) m = std::max(m, std::abs(k));
        M_ = m;
        c_.assign(2 * M_ + 1, Complex(0.0));
        for (const auto& [k, c] : fourier) c_[k + M_] = c;
        validate();
    }

    static BoundaryCurve circle(double radius, Complex center = 0.0) {
        if (radius <= 0.0) throw std::invalid_argument("circle: radius must be positive");
        return BoundaryCurve({{0, center}, {1, radius}});
    }

    // gamma(t) = center + (a+b)/2 e^{it} + (a-b)/2 e^{-it}
    static BoundaryCurve ellipse(double a, double b, Complex center = 0.0) {
        if (a <= 0.0 || b <= 0.0)
            throw std::invalid_argument("ellipse: semi-axes must be positive");
        return BoundaryCurve({{0, center}, {1, (a + b) / 2.0}, {-1, (a - b) / 2.0}});
    }

    int max_mode() const { return M_; }

    Complex coefficient(int k) const {
        return std::abs(k) > M_ ? Complex(0.0) : c_[k + M_];
    }

    Complex eval(double t) const { return derivative(t, 0); }

    Complex derivative(double t, int order) const {
        Complex s = 0.0;
        for (int k = -M_; k <= M_; ++k) {
            Complex term = c_[k + M_];
            if (term == 0.0) continue;
            for (int d = 0; d < order; ++d) term *= Complex(0.0, k);
            s += term * std::polar(1.0, k * t);
        }
        return s;
    }

    // exact: (1/2) Im oint conj(gamma) gamma' dt = pi sum k |c_k|^2
    double signed_area() const {
        double a = 0.0;
        for (int k = -M_; k <= M_; ++k) a += k * std::norm(c_[k + M_]);
        return std::numbers::pi * a;
    }

    BoundaryCurve reversed() const {
        std::map<int, Complex> f;
        for (int k = -M_; k <= M_; ++k)
            if (c_[k + M_] != 0.0) f[-k] = c_[k + M_];
        return BoundaryCurve(f);
    }

    // z -> rot*z + shift applied to the curve (rot may include a scale)
    BoundaryCurve transformed(Complex rot, Complex shift) const {
        std::map<int, Complex> f;
        for (int k = -M_; k <= M_; ++k)
            if (c_[k + M_] != 0.0) f[k] = rot * c_[k + M_];
        f[0] += shift;
        return BoundaryCurve(f);
    }

    friend bool operator==(const BoundaryCurve&, const BoundaryCurve&) = default;

private:
    // nonvanishing tangent and simplicity, both at grid resolution
    void validate() const {
        constexpr int N = 512;
        std::vector<Complex> pts(N), tans(N);
        double dmax = 0.0;
        for (int i = 0; i < N; ++i) {
            const double t = 2.0 * std::numbers::pi * i / N;
            pts[i] = derivative(t, 0);
            tans[i] = derivative(t, 1);
            dmax = std::max(dmax, std::abs(tans[i]));
        }
        if (dmax == 0.0) throw std::invalid_argument("BoundaryCurve: curve is constant");
        double spacing = 0.0;
        for (int i = 0; i < N; ++i) {
            if (std::abs(tans[i]) < 1e-10 * dmax)
                throw std::invalid_argument("BoundaryCurve: degenerate tangent");
            spacing += std::abs(pts[(i + 1) % N] - pts[i]);
        }
        spacing /= N;
        for (int i = 0; i < N; ++i)
            for (int j = i + 3; j < N; ++j) {
                if (i == 0 && j >= N - 3) continue;  // wraparound neighbours
                if (std::abs(pts[i] - pts[j]) < 0.25 * spacing)
                    throw std::invalid_argument("BoundaryCurve: curve is not simple");
            }
    }

    int M_ = 0;
    std::vector<Complex> c_;
};

// ---- domains and boundary points ----

enum class Component { outer, inner };

struct BoundaryPoint {
    Component which = Component::outer;
    double t = 0.0;
};

inline double reduce_angle(double t) {
    const double tau = 2.0 * std::numbers::pi;
    double r = std::fmod(t, tau);
    if (r < 0.0) r += tau;
    return r;
}

namespace detail {

// parameter of the closest curve point: best of 512 grid samples refined by
// Newton on d/dt |gamma(t)-z|^2, at most 30 steps, tolerance 1e-13
inline double foot_parameter(const BoundaryCurve& c, Complex z) {
    constexpr int N = 512;
    double best_t = 0.0, best_d = std::numeric_limits<double>::max();
    for (int i = 0; i < N; ++i) {
        const double t = 2.0 * std::numbers::pi * i / N;
        const double d = std::abs(c.eval(t) - z);
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    double t = best_t;
    for (int iter = 0; iter < 30; ++iter) {
        const Complex g = c.eval(t), g1 = c.derivative(t, 1), g2 = c.derivative(t, 2);
        const double f1 = 2.0 * (std::conj(g - z) * g1).real();
        const double f2 = 2.0 * (std::norm(g1) + (std::conj(g - z) * g2).real());
        if (f2 == 0.0) break;
        const double step = f1 / f2;
        t -= step;
        if (std::abs(step) < 1e-13) return reduce_angle(t);
    }
    return reduce_angle(t);  // flat minimum; grid point is already adequate
}

inline Complex tangent_checked(const BoundaryCurve& c, double t) {
    const Complex g1 = c.derivative(t, 1);
    if (std::abs(g1) < 1e-14)
        throw std::runtime_error("boundary curve: degenerate tangent");
    return g1;
}

}  // namespace detail

class PlanarDomain {
public:
    explicit PlanarDomain(BoundaryCurve outer,
                          std::optional<BoundaryCurve> inner = std::nullopt)
        : outer_(orient(std::move(outer), +1.0, "outer")),
          inner_(inner ? std::optional<BoundaryCurve>(orient(std::move(*inner), -1.0, "inner"))
                       : std::nullopt) {
        if (inner_) validate_nested();
    }

    const BoundaryCurve& outer() const { return outer_; }
    const std::optional<BoundaryCurve>& inner() const { return inner_; }
    bool doubly_connected() const { return inner_.has_value(); }

    const BoundaryCurve& curve(Component which) const {
        if (which == Component::outer) return outer_;
        if (!inner_) throw std::invalid_argument("PlanarDomain: no inner boundary");
        return *inner_;
    }

    // strict interior test: z is on the domain side of every component
    bool contains(Complex z) const {
        return side(outer_, z) < 0.0 && (!inner_ || side(*inner_, z) < 0.0);
    }

private:
    static BoundaryCurve orient(BoundaryCurve c, double sign, const char* which) {
        const double a = c.signed_area();
        if (a == 0.0)
            throw std::invalid_argument(std::string("PlanarDomain: ") + which +
                                        " curve encloses no area");
        return (a * sign > 0.0) ? c : c.reversed();
    }

    // signed side of one component: negative on the domain side
    static double side(const BoundaryCurve& c, Complex z) {
        const double t = detail::foot_parameter(c, z);
        const Complex g1 = detail::tangent_checked(c, t);
        const Complex nu = Complex(0.0, -1.0) * g1 / std::abs(g1);
        return (std::conj(nu) * (z - c.eval(t))).real();
    }

    void validate_nested() const {
        constexpr int N = 128;
        double sep = std::numeric_limits<double>::max();
        for (int i = 0; i < N; ++i) {
            const double t = 2.0 * std::numbers::pi * i / N;
            const Complex w = inner_->eval(t);
            if (side(outer_, w) >= 0.0)
                throw std::invalid_argument("PlanarDomain: inner curve not inside outer");
            for (int j = 0; j < N; ++j)
                sep = std::min(sep, std::abs(w - outer_.eval(2.0 * std::numbers::pi * j / N)));
        }
        if (sep < 1e-9)
            throw std::invalid_argument("PlanarDomain: boundary components touch");
    }

    BoundaryCurve outer_;
    std::optional<BoundaryCurve> inner_;
};

// ---- pointwise boundary data ----

inline Complex boundary_position(const PlanarDomain& d, const BoundaryPoint& p) {
    return d.curve(p.which).eval(reduce_angle(p.t));
}

inline Complex outward_normal(const PlanarDomain& d, const BoundaryPoint& p) {
    const Complex g1 = detail::tangent_checked(d.curve(p.which), reduce_angle(p.t));
    return Complex(0.0, -1.0) * g1 / std::abs(g1);
}

inline double boundary_curvature(const PlanarDomain& d, const BoundaryPoint& p) {
    const BoundaryCurve& c = d.curve(p.which);
    const double t = reduce_angle(p.t);
    const Complex g1 = detail::tangent_checked(c, t);
    const Complex g2 = c.derivative(t, 2);
    const double n1 = std::abs(g1);
    return (std::conj(g1) * g2).imag() / (n1 * n1 * n1);
}

struct BoundaryFoot {
    double delta = 0.0;
    BoundaryPoint foot;
};

inline BoundaryFoot boundary_distance(const PlanarDomain& d, Complex z) {
    if (!d.contains(z))
        throw std::invalid_argument("boundary_distance: point not strictly inside the domain");
    BoundaryFoot best;
    best.delta = std::numeric_limits<double>::max();
    for (const Component which : {Component::outer, Component::inner}) {
        if (which == Component::inner && !d.doubly_connected()) continue;
        const BoundaryCurve& c = d.curve(which);
        const double t = detail::foot_parameter(c, z);
        const double delta = std::abs(c.eval(t) - z);
        if (delta < best.delta) best = BoundaryFoot{delta, BoundaryPoint{which, t}};
    }
    return best;
}

// samples p - delta * outward_normal along the inward normal ray
inline std::vector<Complex> normal_ray(const PlanarDomain& d, const BoundaryPoint& p,
                                       const std::vector<double>& deltas) {
    const Complex base = boundary_position(d, p);
    const Complex nu = outward_normal(d, p);
    std::vector<Complex> out;
    out.reserve(deltas.size());
    for (size_t i = 0; i < deltas.size(); ++i) {
        const Complex z = base - deltas[i] * nu;
        if (deltas[i] <= 0.0 || !d.contains(z))
            throw std::invalid_argument("normal_ray: sample " + std::to_string(i) +
                                        " (delta=" + std::to_string(deltas[i]) +
                                        ") leaves the domain");
        out.push_back(z);
    }
    return out;
}

// ---- local defining-function jets ----

// coordinates w = conj(rotation) * (z - origin); rotation is the outward
// normal, so the boundary looks like 2Re(w) + h.o.t. = 0 at w = 0
struct Frame {
    Complex origin;
    Complex rotation;
};

inline Frame boundary_frame(const PlanarDomain& d, const BoundaryPoint& p) {
    return Frame{boundary_position(d, p), outward_normal(d, p)};
}

// Degree-4 Taylor jet of a defining function of D at p in the given frame:
// the boundary graph u = g(v) (u normal, v tangential) is obtained by
// series reversion of the curve parametrization, and the jet is
// 2u - 2 g_2 v^2 - 2 g_3 v^3 - 2 g_4 v^4 with v = (w - conj(w)) / 2i.
inline RealJet local_jet(const PlanarDomain& d, const BoundaryPoint& p, const Frame& frame) {
    const BoundaryCurve& c = d.curve(p.which);
    const double t = reduce_angle(p.t);
    if (std::abs(frame.origin - c.eval(t)) > 1e-9 ||
        std::abs(frame.rotation - outward_normal(d, p)) > 1e-9)
        throw std::invalid_argument("local_jet: frame must sit at p with the outward normal "
                                    "as positive real axis");

    double u[5] = {0, 0, 0, 0, 0}, v[5] = {0, 0, 0, 0, 0};
    double fact = 1.0;
    for (int k = 1; k <= 4; ++k) {
        fact *= k;
        const Complex loc = std::conj(frame.rotation) * c.derivative(t, k) / fact;
        u[k] = loc.real();
        v[k] = loc.imag();
    }
    // the tangent is purely imaginary in this frame; drop its roundoff ghost
    u[1] = 0.0;
    if (std::abs(v[1]) < 1e-14)
        throw std::runtime_error("local_jet: degenerate tangent");

    // invert v(tau) = v1 tau + v2 tau^2 + ... to tau(v), then expand u(tau(v))
    const double b1 = 1.0 / v[1];
    const double b2 = -v[2] / (v[1] * v[1] * v[1]);
    const double b3 = 2.0 * v[2] * v[2] / std::pow(v[1], 5) - v[3] / std::pow(v[1], 4);
    const double b4 =
        -(v[2] * (2.0 * b1 * b3 + b2 * b2) + 3.0 * v[3] * b1 * b1 * b2 + v[4] * b1 * b1 * b1 * b1) /
        v[1];
    const double g2 = u[2] * b1 * b1;
    const double g3 = 2.0 * u[2] * b1 * b2 + u[3] * b1 * b1 * b1;
    const double g4 = u[2] * (2.0 * b1 * b3 + b2 * b2) + 3.0 * u[3] * b1 * b1 * b2 +
                      u[4] * b1 * b1 * b1 * b1;

    RealJet vjet(1);
    vjet.set_coeff({{1}, {0}}, Complex(0.0, -0.5));
    const RealJet v2 = jet_multiply(vjet, vjet);
    const RealJet v3 = jet_multiply(v2, vjet);
    const RealJet v4 = jet_multiply(v3, vjet);

    RealJet jet(1);
    jet.set_coeff({{1}, {0}}, 1.0);  // 2 Re w
    jet = jet_add(jet, jet_scale(v2, -2.0 * g2));
    jet = jet_add(jet, jet_scale(v3, -2.0 * g3));
    jet = jet_add(jet, jet_scale(v4, -2.0 * g4));
    return jet;
}

inline RealJet local_jet(const PlanarDomain& d, const BoundaryPoint& p) {
    return local_jet(d, p, boundary_frame(d, p));
}

// ---- pinched cones ----

// region |Im(e^{-i theta}(z-apex))| < eta * Re(e^{-i theta}(z-apex))^2 with
// -nu < Re(e^{-i theta}(z-apex)) < 0; theta points along the outward normal
struct PinchedCone {
    BoundaryPoint p;
    Complex apex = 0.0;
    double eta = 1.0;
    double nu = 0.1;
};

inline bool cone_contains(const PinchedCone& c, double theta, Complex z) {
    const Complex w = std::polar(1.0, -theta) * (z - c.apex);
    if (!(w.real() > -c.nu && w.real() < 0.0)) return false;
    return std::abs(w.imag()) < c.eta * w.real() * w.real();
}

inline double cone_frame_angle(const PlanarDomain& d, const BoundaryPoint& p) {
    return std::arg(outward_normal(d, p));
}

// nu defaults to min(0.1, 0.1/|kappa_p|); the cone is sampled and must lie
// inside the domain
inline PinchedCone make_pinched_cone(const PlanarDomain& d, const BoundaryPoint& p,
                                     double eta = 1.0, double nu = -1.0) {
    if (eta <= 0.0) throw std::invalid_argument("make_pinched_cone: eta must be positive");
    const double kap = std::abs(boundary_curvature(d, p));
    if (nu < 0.0) nu = (kap == 0.0) ? 0.1 : std::min(0.1, 0.1 / kap);
    if (nu <= 0.0) throw std::invalid_argument("make_pinched_cone: nu must be positive");
    PinchedCone cone{BoundaryPoint{p.which, reduce_angle(p.t)}, boundary_position(d, p), eta, nu};
    const double theta = cone_frame_angle(d, p);
    for (int i = 1; i <= 32; ++i) {
        const double x = -nu * i / 33.0;
        for (const double r : {-0.999, 0.0, 0.999}) {
            const Complex w(x, r * eta * x * x);
            if (!d.contains(cone.apex + std::polar(1.0, theta) * w))
                throw std::invalid_argument("make_pinched_cone: cone exits the domain");
        }
    }
    return cone;
}

}  // namespace metriclab
