#pragma once

// Truncated degree-4 Taylor jets of real-valued defining functions in n
// complex variables, plus the normal-form pipelines that bring a boundary
// jet 2Re(z1) + ... into the model shapes
//
//   planar:  2Re(z) + kappa|z|^2 + a|z|^4
//   n >= 2:  2Re(z1) + kappa|z1|^2 + |z'|^2 + tau|z1|^4 + (terms quadratic in z')
//
// Every step of a pipeline is either a multiplication by a real-valued jet
// (change of defining function) or a composition with a holomorphic
// polynomial map (change of coordinates); both are recorded so a run can be
// replayed bit for bit.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace metriclab {

using Complex = std::complex<double>;

// ---- monomial keys ----

// Exponents of z^alpha zbar^beta.  Ordering is lexicographic (alpha, beta)
// so maps keyed on MonomialKey iterate deterministically.
struct MonomialKey {
    std::vector<int> alpha;
    std::vector<int> beta;

    int degree() const {
        int d = 0;
        for (int a : alpha) d += a;
        for (int b : beta) d += b;
        return d;
    }
    MonomialKey mirrored() const { return MonomialKey{beta, alpha}; }

    auto operator<=>(const MonomialKey&) const = default;
};

inline std::vector<int> unit_index(int n, int i) {
    std::vector<int> e(n, 0);
    e[i] += 1;
    return e;
}

inline std::vector<int> zero_index(int n) { return std::vector<int>(n, 0); }

inline std::vector<int> add_index(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

// ---- real jets ----

// Real-valued polynomial jet: stores coeff(alpha,beta) with the Hermitian
// constraint coeff(alpha,beta) = conj(coeff(beta,alpha)) maintained by
// set_coeff itself, and diagonal coefficients kept exactly real.
class RealJet {
public:
    explicit RealJet(int dim = 1) : dim_(dim) {
        if (dim < 1) throw std::invalid_argument("RealJet: dimension must be positive");
    }

    int dim() const { return dim_; }

    Complex coeff(const MonomialKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
    }

    // Writes both the key and its mirror; a zero value erases the pair.
    void set_coeff(const MonomialKey& k, Complex c) {
        check_key(k);
        const MonomialKey m = k.mirrored();
        if (k == m && c.imag() != 0.0)
            throw std::invalid_argument("RealJet: diagonal coefficient must be real");
        if (c == 0.0) {
            terms_.erase(k);
            terms_.erase(m);
        } else {
            terms_[k] = c;
            terms_[m] = std::conj(c);
        }
    }

    const std::map<MonomialKey, Complex>& terms() const { return terms_; }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    friend bool operator==(const RealJet&, const RealJet&) = default;

private:
    void check_key(const MonomialKey& k) const {
        if (static_cast<int>(k.alpha.size()) != dim_ ||
            static_cast<int>(k.beta.size()) != dim_)
            throw std::invalid_argument("RealJet: key dimension mismatch");
        for (int a : k.alpha)
            if (a < 0) throw std::invalid_argument("RealJet: negative exponent");
        for (int b : k.beta)
            if (b < 0) throw std::invalid_argument("RealJet: negative exponent");
        if (k.degree() > 4)
            throw std::invalid_argument("RealJet: total degree exceeds 4");
    }

    int dim_;
    std::map<MonomialKey, Complex> terms_;
};

namespace detail {

// Rebuild a RealJet from a raw (possibly asymmetric up to roundoff) term
// map: the lexicographically smaller key of each mirror pair is taken as
// authoritative, which makes the Hermitian constraint exact by fiat.
inline RealJet symmetrized(int dim, const std::map<MonomialKey, Complex>& raw) {
    RealJet out(dim);
    for (const auto& [k, v] : raw) {
        const MonomialKey m = k.mirrored();
        if (m < k) continue;  // handled from the canonical side
        Complex val = v;
        if (k == m) val = Complex(val.real(), 0.0);
        if (val != 0.0) out.set_coeff(k, val);
    }
    return out;
}

}  // namespace detail

// ---- holomorphic polynomial maps ----

// Holomorphic polynomial map C^n -> C^n of degree <= 4 per component,
// stored as exponent -> coefficient tables.  Composition requires an
// invertible derivative at the origin.
struct PolynomialMap {
    int dim = 1;
    // component[i]: multi-index of z -> complex coefficient
    std::vector<std::map<std::vector<int>, Complex>> component;

    static PolynomialMap identity(int n) {
        PolynomialMap p;
        p.dim = n;
        p.component.resize(n);
        for (int i = 0; i < n; ++i) p.component[i][unit_index(n, i)] = 1.0;
        return p;
    }

    Eigen::MatrixXcd linear_part() const {
        Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < dim; ++k) {
                auto it = component[i].find(unit_index(dim, k));
                if (it != component[i].end()) L(i, k) = it->second;
            }
        return L;
    }

    friend bool operator==(const PolynomialMap&, const PolynomialMap&) = default;
};

// ---- jet algebra ----

inline RealJet jet_multiply(const RealJet& a, const RealJet& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("jet_multiply: dimension mismatch");
    std::map<MonomialKey, Complex> raw;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            if (ka.degree() + kb.degree() > 4) continue;
            MonomialKey k{add_index(ka.alpha, kb.alpha), add_index(ka.beta, kb.beta)};
            raw[k] += ca * cb;
        }
    return detail::symmetrized(a.dim(), raw);
}

inline RealJet jet_add(const RealJet& a, const RealJet& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("jet_add: dimension mismatch");
    std::map<MonomialKey, Complex> raw = a.terms();
    for (const auto& [k, c] : b.terms()) raw[k] += c;
    return detail::symmetrized(a.dim(), raw);
}

inline RealJet jet_scale(const RealJet& a, double s) {
    std::map<MonomialKey, Complex> raw;
    for (const auto& [k, c] : a.terms()) raw[k] = s * c;
    return detail::symmetrized(a.dim(), raw);
}

namespace detail {

using HoloPoly = std::map<std::vector<int>, Complex>;

inline int index_degree(const std::vector<int>& v) {
    int d = 0;
    for (int x : v) d += x;
    return d;
}

inline HoloPoly holo_multiply(const HoloPoly& a, const HoloPoly& b) {
    HoloPoly out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            if (index_degree(ea) + index_degree(eb) > 4) continue;
            out[add_index(ea, eb)] += ca * cb;
        }
    return out;
}

inline HoloPoly holo_one(int n) {
    HoloPoly p;
    p[zero_index(n)] = 1.0;
    return p;
}

inline HoloPoly conjugated(const HoloPoly& a) {
    HoloPoly out;
    for (const auto& [e, c] : a) out[e] = std::conj(c);
    return out;
}

}  // namespace detail

// Substitutes z = psi(w) into j and truncates at total degree 4.
inline RealJet jet_compose(const RealJet& j, const PolynomialMap& psi) {
    const int n = j.dim();
    if (psi.dim != n || static_cast<int>(psi.component.size()) != n)
        throw std::invalid_argument("jet_compose: dimension mismatch");
    for (const auto& comp : psi.component)
        for (const auto& [e, c] : comp)
            if (detail::index_degree(e) > 4)
                throw std::invalid_argument("jet_compose: map degree exceeds 4");
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(psi.linear_part());
    if (!lu.isInvertible())
        throw std::invalid_argument("jet_compose: non-invertible linear part");

    // powers[i][k] = psi_i(w)^k truncated at degree 4
    std::vector<std::array<detail::HoloPoly, 5>> powers(n);
    for (int i = 0; i < n; ++i) {
        powers[i][0] = detail::holo_one(n);
        detail::HoloPoly base;
        for (const auto& [e, c] : psi.component[i]) base[e] = c;
        for (int k = 1; k <= 4; ++k)
            powers[i][k] = detail::holo_multiply(powers[i][k - 1], base);
    }

    std::map<MonomialKey, Complex> raw;
    for (const auto& [key, c] : j.terms()) {
        detail::HoloPoly holo = detail::holo_one(n);
        for (int i = 0; i < n; ++i)
            if (key.alpha[i] > 0) holo = detail::holo_multiply(holo, powers[i][key.alpha[i]]);
        detail::HoloPoly anti = detail::holo_one(n);
        for (int i = 0; i < n; ++i)
            if (key.beta[i] > 0)
                anti = detail::holo_multiply(anti, detail::conjugated(powers[i][key.beta[i]]));
        for (const auto& [eh, ch] : holo)
            for (const auto& [ea, ca] : anti) {
                if (detail::index_degree(eh) + detail::index_degree(ea) > 4) continue;
                raw[MonomialKey{eh, ea}] += c * ch * ca;
            }
    }
    return detail::symmetrized(n, raw);
}

// ---- pointwise quantities ----

namespace detail {

// formal Wirtinger derivative of a raw term map, holomorphic (bar = false)
// or antiholomorphic (bar = true) in variable i
inline std::map<MonomialKey, Complex> wirtinger(const std::map<MonomialKey, Complex>& terms,
                                                int i, bool bar) {
    std::map<MonomialKey, Complex> out;
    for (const auto& [k, c] : terms) {
        const int e = bar ? k.beta[i] : k.alpha[i];
        if (e == 0) continue;
        MonomialKey d = k;
        if (bar) d.beta[i] -= 1; else d.alpha[i] -= 1;
        out[d] += c * static_cast<double>(e);
    }
    return out;
}

inline Complex evaluate_terms(const std::map<MonomialKey, Complex>& terms,
                              const std::vector<Complex>& p) {
    Complex s = 0.0;
    for (const auto& [k, c] : terms) {
        Complex m = c;
        for (size_t i = 0; i < p.size(); ++i) {
            for (int e = 0; e < k.alpha[i]; ++e) m *= p[i];
            for (int e = 0; e < k.beta[i]; ++e) m *= std::conj(p[i]);
        }
        s += m;
    }
    return s;
}

}  // namespace detail

// Real gradient of the jet at 0 in coordinates (x1, y1, ..., xn, yn).
inline std::vector<double> jet_gradient(const RealJet& j) {
    const int n = j.dim();
    std::vector<double> g(2 * n, 0.0);
    for (int i = 0; i < n; ++i) {
        const Complex c = j.coeff({unit_index(n, i), zero_index(n)});
        g[2 * i] = 2.0 * c.real();
        g[2 * i + 1] = -2.0 * c.imag();
    }
    return g;
}

// Real Hessian quadratic form of the jet at p applied to the real 2n-vector
// v, components ordered (x1, y1, ..., xn, yn).  Differentiation is symbolic,
// so the value is exact for the polynomial the jet represents.
inline double hessian_form(const RealJet& j, const std::vector<Complex>& p,
                           const std::vector<double>& v) {
    const int n = j.dim();
    if (static_cast<int>(p.size()) != n)
        throw std::invalid_argument("hessian_form: point dimension mismatch");
    if (static_cast<int>(v.size()) != 2 * n)
        throw std::invalid_argument("hessian_form: vector must have 2n real components");

    // P(i,j) = d2/dz_i dz_j, M(i,j) = d2/dz_i dzbar_j at p
    Eigen::MatrixXcd P(n, n), M(n, n);
    for (int i = 0; i < n; ++i) {
        auto di = detail::wirtinger(j.terms(), i, false);
        for (int k = 0; k < n; ++k) {
            P(i, k) = detail::evaluate_terms(detail::wirtinger(di, k, false), p);
            M(i, k) = detail::evaluate_terms(detail::wirtinger(di, k, true), p);
        }
    }

    // real Hessian entries from the Wirtinger blocks; for a real-valued jet
    // the imaginary parts cancel, so only Re/Im combinations appear
    Eigen::MatrixXd H(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            H(2 * i, 2 * k) = 2.0 * P(i, k).real() + 2.0 * M(i, k).real();
            H(2 * i, 2 * k + 1) = -2.0 * P(i, k).imag() + 2.0 * M(i, k).imag();
            H(2 * i + 1, 2 * k) = -2.0 * P(i, k).imag() - 2.0 * M(i, k).imag();
            H(2 * i + 1, 2 * k + 1) = -2.0 * P(i, k).real() + 2.0 * M(i, k).real();
        }

    double s = 0.0;
    for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b) s += H(a, b) * v[a] * v[b];
    return s;
}

// Planar boundary curvature read off a jet 2Re(z + a z^2) + b|z|^2 + ...,
// namely b - 2Re(a).
inline double planar_curvature(const RealJet& j) {
    if (j.dim() != 1)
        throw std::invalid_argument("planar_curvature: jet must be one-variable");
    const Complex c10 = j.coeff({{1}, {0}});
    if (std::abs(c10 - 1.0) > 1e-12)
        throw std::invalid_argument("planar_curvature: linear part must be 2Re z");
    const double b = j.coeff({{1}, {1}}).real();
    const Complex a = j.coeff({{2}, {0}});
    return b - 2.0 * a.real();
}

// Normal curvature quantity H_phi(0)(J eta) / |eta|^3 where eta is the real
// gradient at 0 and J is multiplication by i on each complex coordinate.
inline double kappa_p(const RealJet& j, const std::vector<double>& etap) {
    const int n = j.dim();
    if (static_cast<int>(etap.size()) != 2 * n)
        throw std::invalid_argument("kappa_p: gradient must have 2n real components");
    double norm2 = 0.0;
    for (double x : etap) norm2 += x * x;
    if (norm2 == 0.0) throw std::invalid_argument("kappa_p: zero gradient");
    std::vector<double> jeta(2 * n);
    for (int i = 0; i < n; ++i) {
        jeta[2 * i] = -etap[2 * i + 1];
        jeta[2 * i + 1] = etap[2 * i];
    }
    const double norm = std::sqrt(norm2);
    return hessian_form(j, std::vector<Complex>(n, 0.0), jeta) / (norm * norm * norm);
}

inline double kappa_p(const RealJet& j) { return kappa_p(j, jet_gradient(j)); }

// ---- normal forms ----

struct MultiplierStep {
    RealJet factor;
    friend bool operator==(const MultiplierStep&, const MultiplierStep&) = default;
};

struct CoordinateChangeStep {
    PolynomialMap map;
    friend bool operator==(const CoordinateChangeStep&, const CoordinateChangeStep&) = default;
};

using NormalStep = std::variant<MultiplierStep, CoordinateChangeStep>;

struct NormalFormReport {
    std::vector<NormalStep> steps;
    RealJet final_jet;
    double kappa = 0.0;
    double quartic = 0.0;             // planar: |z|^4 coefficient of final_jet
    double tau = 0.0;                 // n >= 2: |z1|^4 coefficient of final_jet
    std::vector<double> tau_tilde;    // n >= 2: coefficient of z_j^2 in the closing change
};

// Applies recorded steps to a jet in order; reproduces the pipeline output
// bit for bit because the same two operations run on the same values.
inline RealJet replay_steps(const RealJet& input, const std::vector<NormalStep>& steps) {
    RealJet cur = input;
    for (const auto& step : steps) {
        if (std::holds_alternative<MultiplierStep>(step))
            cur = jet_multiply(cur, std::get<MultiplierStep>(step).factor);
        else
            cur = jet_compose(cur, std::get<CoordinateChangeStep>(step).map);
    }
    return cur;
}

namespace detail {

inline void require_normalized_linear_part(const RealJet& j, const char* who) {
    const int n = j.dim();
    if (std::abs(j.coeff({zero_index(n), zero_index(n)})) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": constant term must vanish");
    if (std::abs(j.coeff({unit_index(n, 0), zero_index(n)}) - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": linear part must be 2Re(z1)");
    for (int i = 1; i < n; ++i)
        if (std::abs(j.coeff({unit_index(n, i), zero_index(n)})) > 1e-12)
            throw std::invalid_argument(std::string(who) + ": linear part must be 2Re(z1)");
}

// The planar schedule, phrased over the first variable of an n-variable jet
// so the same code drives normalize_planar and the slice stage of
// normalize_scv.  Multiplier and change parameters are read from the jet as
// it currently stands; a step whose parameter vanishes is skipped entirely.
inline void planar_schedule(RealJet& cur, std::vector<NormalStep>& steps,
                            double target_quartic) {
    const int n = cur.dim();
    const auto e1 = unit_index(n, 0);
    const auto z0 = zero_index(n);
    auto key1 = [&](int a, int b) {
        std::vector<int> al = z0, be = z0;
        al[0] = a;
        be[0] = b;
        return MonomialKey{al, be};
    };
    auto mult = [&](const RealJet& m) {
        steps.push_back(MultiplierStep{m});
        cur = jet_multiply(cur, m);
    };
    auto change = [&](const PolynomialMap& psi) {
        steps.push_back(CoordinateChangeStep{psi});
        cur = jet_compose(cur, psi);
    };

    // multiplier  1 - a z1 - conj(a) zbar1  removing z1^2
    const Complex a = cur.coeff(key1(2, 0));
    if (a != 0.0) {
        RealJet m(n);
        m.set_coeff({z0, z0}, 1.0);
        m.set_coeff({e1, z0}, -a);
        mult(m);
    }

    // cubic coordinate change z1 + s z1^3.  The mixed-cubic multiplier below
    // will feed -u into the z1^3 slot, so s is chosen to land on u now and
    // on zero afterwards.
    const Complex u_ahead = cur.coeff(key1(2, 1));
    const Complex c30 = cur.coeff(key1(3, 0));
    const Complex s = u_ahead - c30;
    if (s != 0.0) {
        PolynomialMap psi = PolynomialMap::identity(n);
        std::vector<int> cub = z0;
        cub[0] = 3;
        psi.component[0][cub] = s;
        change(psi);
    }

    // multiplier  1 - u z1^2 - conj(u) zbar1^2  removing z1^2 zbar1
    const Complex u = cur.coeff(key1(2, 1));
    if (u != 0.0) {
        RealJet m(n);
        m.set_coeff({z0, z0}, 1.0);
        std::vector<int> sq = z0;
        sq[0] = 2;
        m.set_coeff({sq, z0}, -u);
        mult(m);
    }

    // multiplier  1 - v z1 zbar1^2 - v z1^2 zbar1  (v real) pinning |z1|^4
    const double q22 = cur.coeff(key1(2, 2)).real();
    const double v = (q22 - target_quartic) / 2.0;
    if (v != 0.0) {
        RealJet m(n);
        m.set_coeff({z0, z0}, 1.0);
        std::vector<int> one = z0, two = z0;
        one[0] = 1;
        two[0] = 2;
        m.set_coeff({one, two}, Complex(-v, 0.0));
        mult(m);
    }

    // multiplier  1 - w z1^3 - conj(w) zbar1^3  removing z1^3 zbar1
    const Complex w = cur.coeff(key1(3, 1));
    if (w != 0.0) {
        RealJet m(n);
        m.set_coeff({z0, z0}, 1.0);
        std::vector<int> cub = z0;
        cub[0] = 3;
        m.set_coeff({cub, z0}, -w);
        mult(m);
    }

    // quartic coordinate change z1 + c z1^4 removing z1^4
    const Complex c40 = cur.coeff(key1(4, 0));
    if (c40 != 0.0) {
        PolynomialMap psi = PolynomialMap::identity(n);
        std::vector<int> quart = z0;
        quart[0] = 4;
        psi.component[0][quart] = -c40;
        change(psi);
    }
}

}  // namespace detail

// Brings a one-variable jet with linear part 2Re(z) to
// 2Re(z) + kappa|z|^2 + target_quartic |z|^4.
inline NormalFormReport normalize_planar(const RealJet& j, double target_quartic = 0.0) {
    if (j.dim() != 1)
        throw std::invalid_argument("normalize_planar: jet must be one-variable");
    detail::require_normalized_linear_part(j, "normalize_planar");

    NormalFormReport rep;
    rep.kappa = planar_curvature(j);
    RealJet cur = j;
    detail::planar_schedule(cur, rep.steps, target_quartic);
    rep.final_jet = cur;
    rep.quartic = cur.coeff({{2}, {2}}).real();
    return rep;
}

// Brings an n >= 2 variable jet with linear part 2Re(z1) and positive
// definite z'-Hessian to the model shape: kappa|z1|^2, identity |z'|^2
// block, no z1 zbar_j terms, no holomorphic quadratics, no cubic or quartic
// terms of type z_j z1^k zbar1^l, and pure-z1 quartic tau|z1|^4 with
// tau = 1 coming from the slice normalization.  The closing change
// z_j -> z_j + (1/2) z_j^2 is always recorded, with its coefficients
// reported in tau_tilde.
inline NormalFormReport normalize_scv(const RealJet& j) {
    const int n = j.dim();
    if (n < 2)
        throw std::invalid_argument("normalize_scv: jet must have at least two variables");
    detail::require_normalized_linear_part(j, "normalize_scv");

    const auto z0 = zero_index(n);
    auto e = [&](int i) { return unit_index(n, i); };

    // strict pseudoconvexity: Hermitian z'-block must be positive definite
    Eigen::MatrixXcd G(n - 1, n - 1);
    for (int r = 1; r < n; ++r)
        for (int c = 1; c < n; ++c) G(r - 1, c - 1) = j.coeff({e(r), e(c)});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("normalize_scv: eigensolver failed");
    const double lam_max = eig.eigenvalues().maxCoeff();
    if (eig.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, lam_max))
        throw std::invalid_argument("normalize_scv: not strictly pseudoconvex");

    NormalFormReport rep;
    rep.kappa = j.coeff({e(0), e(0)}).real() - 2.0 * j.coeff({add_index(e(0), e(0)), z0}).real();

    RealJet cur = j;
    auto mult = [&](const RealJet& m) {
        rep.steps.push_back(MultiplierStep{m});
        cur = jet_multiply(cur, m);
    };
    auto change = [&](const PolynomialMap& psi) {
        rep.steps.push_back(CoordinateChangeStep{psi});
        cur = jet_compose(cur, psi);
    };

    // slice stage: planar schedule along z1 with quartic target 1, which is
    // what makes tau positive
    detail::planar_schedule(cur, rep.steps, 1.0);

    // linear change (z1, A z') making the z'-block the identity; columns are
    // ordered by descending eigenvalue with the first significant component
    // rotated to be positive real
    {
        Eigen::MatrixXcd Gc(n - 1, n - 1);
        for (int r = 1; r < n; ++r)
            for (int c = 1; c < n; ++c) Gc(r - 1, c - 1) = cur.coeff({e(r), e(c)});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gc);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("normalize_scv: eigensolver failed");
        const int m = n - 1;
        Eigen::MatrixXcd U(m, m);
        Eigen::VectorXd lam(m);
        for (int c = 0; c < m; ++c) {  // reverse: Eigen returns ascending
            lam(c) = es.eigenvalues()(m - 1 - c);
            U.col(c) = es.eigenvectors().col(m - 1 - c);
        }
        if (lam(m - 1) <= 0.0)
            throw std::invalid_argument("normalize_scv: not strictly pseudoconvex");
        for (int c = 0; c < m; ++c) {
            for (int r = 0; r < m; ++r)
                if (std::abs(U(r, c)) > 1e-12) {
                    U.col(c) *= std::conj(U(r, c) / std::abs(U(r, c)));
                    break;
                }
        }
        Eigen::MatrixXcd A = U.conjugate();
        for (int c = 0; c < m; ++c) A.col(c) /= std::sqrt(lam(c));
        if (!A.isIdentity(0.0)) {
            PolynomialMap psi = PolynomialMap::identity(n);
            for (int r = 0; r < m; ++r) {
                psi.component[r + 1].clear();
                for (int c = 0; c < m; ++c)
                    if (A(r, c) != 0.0) psi.component[r + 1][e(c + 1)] = A(r, c);
            }
            change(psi);
        }
    }

    // multiplier removing the z1 zbar_j terms
    {
        RealJet m(n);
        m.set_coeff({z0, z0}, 1.0);
        bool any = false;
        for (int k = 1; k < n; ++k) {
            const Complex b = cur.coeff({e(0), e(k)});
            if (b != 0.0) {
                m.set_coeff({z0, e(k)}, -b);
                any = true;
            }
        }
        if (any) mult(m);
    }

    // coordinate change removing holomorphic quadratics (z1^2 is already
    // gone after the slice stage)
    {
        PolynomialMap psi = PolynomialMap::identity(n);
        bool any = false;
        for (int r = 0; r < n; ++r)
            for (int c = r; c < n; ++c) {
                if (r == 0 && c == 0) continue;
                const Complex q = cur.coeff({add_index(e(r), e(c)), z0});
                if (q != 0.0) {
                    psi.component[0][add_index(e(r), e(c))] = -q;
                    any = true;
                }
            }
        if (any) change(psi);
    }

    // cascades removing terms a z_j z1^k zbar1^l; each kill can feed the
    // next class in line, so the order (0,l) up to the pure-holomorphic one
    // terminates
    for (int k = 1; k < n; ++k) {
        // cubic classes: (k,l) = (0,2), (1,1), then change for (2,0)
        {
            const Complex c = cur.coeff({e(k), add_index(e(0), e(0))});
            if (c != 0.0) {
                RealJet m(n);
                m.set_coeff({z0, z0}, 1.0);
                m.set_coeff({e(k), e(0)}, -c);
                mult(m);
            }
        }
        {
            const Complex c = cur.coeff({add_index(e(k), e(0)), e(0)});
            if (c != 0.0) {
                RealJet m(n);
                m.set_coeff({z0, z0}, 1.0);
                m.set_coeff({add_index(e(k), e(0)), z0}, -c);
                mult(m);
            }
        }
        {
            const Complex c = cur.coeff({add_index(e(k), add_index(e(0), e(0))), z0});
            if (c != 0.0) {
                PolynomialMap psi = PolynomialMap::identity(n);
                psi.component[0][add_index(e(k), add_index(e(0), e(0)))] = -c;
                change(psi);
            }
        }
        // quartic classes: (0,3), (1,2), (2,1), then change for (3,0)
        {
            const Complex c = cur.coeff({e(k), add_index(add_index(e(0), e(0)), e(0))});
            if (c != 0.0) {
                RealJet m(n);
                m.set_coeff({z0, z0}, 1.0);
                m.set_coeff({e(k), add_index(e(0), e(0))}, -c);
                mult(m);
            }
        }
        {
            const Complex c = cur.coeff({add_index(e(k), e(0)), add_index(e(0), e(0))});
            if (c != 0.0) {
                RealJet m(n);
                m.set_coeff({z0, z0}, 1.0);
                m.set_coeff({add_index(e(k), e(0)), e(0)}, -c);
                mult(m);
            }
        }
        {
            const Complex c = cur.coeff({add_index(e(k), add_index(e(0), e(0))), e(0)});
            if (c != 0.0) {
                RealJet m(n);
                m.set_coeff({z0, z0}, 1.0);
                m.set_coeff({add_index(e(k), add_index(e(0), e(0))), z0}, -c);
                mult(m);
            }
        }
        {
            const Complex c =
                cur.coeff({add_index(e(k), add_index(add_index(e(0), e(0)), e(0))), z0});
            if (c != 0.0) {
                PolynomialMap psi = PolynomialMap::identity(n);
                psi.component[0][add_index(e(k), add_index(add_index(e(0), e(0)), e(0)))] = -c;
                change(psi);
            }
        }
    }

    // closing change z_j -> z_j + (1/2) z_j^2, always recorded
    {
        PolynomialMap psi = PolynomialMap::identity(n);
        for (int k = 1; k < n; ++k) {
            std::vector<int> sq = z0;
            sq[k] = 2;
            psi.component[k][sq] = 0.5;
        }
        change(psi);
        rep.tau_tilde.assign(n - 1, 0.5);
    }

    rep.final_jet = cur;
    rep.tau = cur.coeff({add_index(e(0), e(0)), add_index(e(0), e(0))}).real();
    if (!(rep.tau > 0.0))
        throw std::runtime_error("normalize_scv: slice quartic failed to come out positive");
    return rep;
}

}  // namespace metriclab
