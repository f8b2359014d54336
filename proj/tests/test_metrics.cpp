#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <metriclab/metrics.hpp>

#include "oracles.hpp"

using namespace metriclab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

PlanarDomain unit_disk() { return PlanarDomain(BoundaryCurve::circle(1.0)); }

PlanarDomain annulus(double q) {
    return PlanarDomain(BoundaryCurve::circle(1.0), BoundaryCurve::circle(q));
}

}  // namespace

TEST_CASE("disk density closed form", "[metrics]") {
    CHECK(disk_density(0.0) == 1.0);
    CHECK_THAT(disk_density(Complex(0.5, 0.0)), WithinAbs(4.0 / 3.0, 1e-15));
    CHECK_THAT(disk_density(Complex(0.9, 0.0)), WithinAbs(1.0 / 0.19, 1e-12));
    CHECK_THROWS_AS(disk_density(Complex(1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(disk_density(Complex(0.8, 0.8)), std::invalid_argument);

    SECTION("invariance under disk Moebius maps") {
        std::mt19937 rng(606);
        std::uniform_real_distribution<double> d(-0.7, 0.7);
        for (int k = 0; k < 30; ++k) {
            const Complex a(d(rng), d(rng));
            const Complex z(d(rng), d(rng));
            if (std::abs(a) > 0.9 || std::abs(z) > 0.9) continue;
            const Complex gz = (z - a) / (1.0 - std::conj(a) * z);
            const Complex den = 1.0 - std::conj(a) * z;
            const Complex dg = (1.0 - std::norm(a)) / (den * den);
            CHECK_THAT(disk_density(gz) * std::abs(dg),
                       WithinAbs(disk_density(z), 1e-12));
        }
    }
}

TEST_CASE("kobayashi through numerically realized charts", "[metrics]") {
    SECTION("unit disk") {
        const MetricEvaluator m(unit_disk(), 128);
        const MetricSample s = m.kobayashi(Complex(0.5, 0.0));
        CHECK_THAT(s.value, WithinAbs(4.0 / 3.0, 1e-10));
        CHECK_THAT(s.delta, WithinAbs(0.5, 1e-12));
        CHECK(s.kind == MetricKind::Kobayashi);
    }

    SECTION("disks of several radii against the scaling closed form") {
        for (const double R : {0.5, 2.0, 3.0}) {
            const MetricEvaluator m(PlanarDomain(BoundaryCurve::circle(R)), 128);
            for (const double x : {0.1 * R, 0.45 * R, -0.8 * R}) {
                const Complex z(x, 0.0);
                CHECK_THAT(m.kobayashi(z).value,
                           WithinAbs(R / (R * R - std::norm(z)), 1e-10));
            }
        }
    }

    SECTION("annulus density against the covering oracle") {
        const double q = 0.2;
        const MetricEvaluator m(annulus(q), 256);
        const Complex core(std::sqrt(q), 0.0);
        CHECK_THAT(m.kobayashi(core).value,
                   WithinRel(oracle::annulus_density_oracle(q, core), 1e-9));
        for (const Complex z : {Complex(0.3, 0.2), Complex(-0.55, 0.3), Complex(0.0, 0.83)})
            CHECK_THAT(m.kobayashi(z).value,
                       WithinRel(oracle::annulus_density_oracle(q, m.annulus_chart().map(z)) *
                                     std::abs(m.annulus_chart().derivative(z)),
                                 1e-9));
    }

    SECTION("chart independence: value insensitive to the map's center") {
        const PlanarDomain ell(BoundaryCurve::ellipse(1.4, 1.0));
        const DirichletSolver s(ell, 256);
        const Complex z(0.3, -0.2);
        double vals[2];
        int i = 0;
        for (const Complex a : {Complex(0.0, 0.0), Complex(0.4, 0.25)}) {
            const DiskChart f = riemann_map(s, a);
            vals[i++] = disk_density(f.map(z)) * std::abs(f.derivative(z));
        }
        CHECK_THAT(vals[0], WithinAbs(vals[1], 1e-9));
    }
}

TEST_CASE("caratheodory rides the riemann map and refuses holes", "[metrics]") {
    const MetricEvaluator disk(unit_disk(), 128);
    CHECK_THAT(disk.caratheodory(0.0).value, WithinAbs(1.0, 1e-11));
    CHECK_THAT(disk.caratheodory(Complex(0.5, 0.0)).value, WithinAbs(4.0 / 3.0, 1e-10));
    CHECK(disk.caratheodory(Complex(0.5, 0.0)).kind == MetricKind::Caratheodory);

    const MetricEvaluator ring(annulus(0.3), 128);
    CHECK_THROWS_AS(ring.caratheodory(Complex(0.6, 0.0)), std::invalid_argument);
}

TEST_CASE("suita metric from robin constants", "[metrics]") {
    const MetricEvaluator m(unit_disk(), 256);
    CHECK_THAT(m.suita(0.0).value, WithinAbs(1.0, 1e-11));
    CHECK_THAT(m.suita(Complex(0.6, 0.0)).value, WithinAbs(1.0 / 0.64, 1e-9));

    SECTION("equals kobayashi on the disk") {
        std::mt19937 rng(707);
        std::uniform_real_distribution<double> d(-0.65, 0.65);
        for (int k = 0; k < 10; ++k) {
            const Complex z(d(rng), d(rng));
            CHECK_THAT(m.suita(z).value, WithinRel(m.kobayashi(z).value, 1e-9));
        }
    }

    SECTION("strictly below kobayashi on the annulus") {
        const MetricEvaluator ring(annulus(0.2), 256);
        for (const Complex z : {Complex(0.45, 0.0), Complex(0.0, 0.6), Complex(-0.5, 0.3)}) {
            const double s = ring.suita(z).value;
            const double k = ring.kobayashi(z).value;
            CHECK(s < k);
            CHECK(s > 0.0);
        }
    }
}

TEST_CASE("deck group of the annulus cover", "[metrics]") {
    const double q = 0.2;
    const Complex w(std::sqrt(q), 0.0);
    const DeckGroup g = deck_group(q, w);

    SECTION("orbit marches out to the unit circle") {
        // |phi^n(0)| saturates to 1.0 in doubles within a few steps, so the
        // strict monotonicity is checked on the stable gap 1 - |phi^n(0)|^2
        double prev_gap = 1.0;
        for (int n = 1; n <= 40; ++n) {
            const double gap = g.one_minus_factor_sq(n);
            CHECK(gap < prev_gap);
            CHECK(gap > 0.0);
            CHECK(std::abs(g.element(n)) <= 1.0);
            CHECK(std::abs(g.element(n)) >= std::abs(g.element(n - 1)));
            CHECK_THAT(g.one_minus_factor_sq(-n), WithinAbs(gap, 0.0));
            prev_gap = gap;
        }
        CHECK(std::abs(g.element(6)) > 1.0 - 1e-12);
        CHECK(g.one_minus_factor_sq(40) < 1e-200);
    }

    SECTION("length and factor agree with the half-plane distance") {
        for (const Complex base : {w, Complex(0.4, 0.3), Complex(-0.1, -0.7)}) {
            const DeckGroup gg = deck_group(q, base);
            for (int n = 1; n <= 3; ++n) {
                const LoopFactor lf = loop_factor(gg, n);
                const Complex u0 = gg.half_plane_lift();
                const Complex un = std::exp(n * gg.generator_log_dilation()) * u0;
                CHECK_THAT(lf.length, WithinAbs(oracle::half_plane_distance(u0, un), 1e-12));
                CHECK_THAT((std::exp(2.0 * lf.length) - 1.0) / (std::exp(2.0 * lf.length) + 1.0),
                           WithinAbs(lf.factor, 1e-13));
                CHECK_THAT(lf.factor, WithinAbs(std::abs(gg.element(n)), 1e-13));
                CHECK_THAT(loop_factor(gg, -n).factor, WithinAbs(lf.factor, 0.0));
            }
        }
    }

    SECTION("a length of half log 3 corresponds to factor one half") {
        const double l = 0.5 * std::log(3.0);
        CHECK_THAT((std::exp(2.0 * l) - 1.0) / (std::exp(2.0 * l) + 1.0),
                   WithinAbs(0.5, 1e-15));
    }

    SECTION("longer loops push the factor to one") {
        // generator factor for basepoint on the core circle, as q varies
        double prev = 0.0;
        for (const double qq : {0.05, 0.15, 0.3, 0.5}) {
            const DeckGroup gg = deck_group(qq, Complex(std::sqrt(qq), 0.0));
            const double f = loop_factor(gg, 1).factor;
            CHECK(f > prev);
            prev = f;
        }
    }

    SECTION("input validation") {
        CHECK_THROWS_AS(deck_group(0.2, Complex(0.1, 0.0)), std::invalid_argument);
        CHECK_THROWS_AS(deck_group(0.2, Complex(1.1, 0.0)), std::invalid_argument);
        CHECK_THROWS_AS(deck_group(1.2, Complex(0.5, 0.0)), std::invalid_argument);
        CHECK_THROWS_AS(loop_factor(g, 0), std::invalid_argument);
    }
}

TEST_CASE("myrberg product equals suita over kobayashi", "[metrics]") {
    SECTION("empty group gives the empty product") {
        CHECK(myrberg_quotient(DeckGroup::trivial(), 1e-9) == 1.0);
    }

    SECTION("annulus identity at several basepoints") {
        for (const double q : {0.2, 0.5}) {
            const MetricEvaluator m(annulus(q), 256);
            for (const Complex z : {Complex(std::sqrt(q), 0.0), Complex(0.0, 0.7),
                                    Complex(-0.6, 0.2)}) {
                const double direct = m.suita(z).value / m.kobayashi(z).value;
                const double product = m.quotient(z, 1e-9);
                CHECK_THAT(product, WithinRel(direct, 1e-7));
                CHECK(product < 1.0);
                CHECK(product > 0.0);
            }
        }
    }

    SECTION("tail bound is reported and tiny") {
        double bound = -1.0;
        const double v = myrberg_quotient(deck_group(0.2, Complex(0.5, 0.0)), 1e-9, &bound);
        CHECK(v > 0.0);
        CHECK(bound >= 0.0);
        CHECK(bound < 1e-13);
    }

    SECTION("tolerance validation") {
        const DeckGroup g = deck_group(0.2, Complex(0.5, 0.0));
        CHECK_THROWS_AS(myrberg_quotient(g, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(myrberg_quotient(g, 1e-5), std::invalid_argument);
    }
}

TEST_CASE("defect route resolves 1 - S/K below machine epsilon", "[metrics]") {
    SECTION("agrees with the complement of the product where both resolve") {
        const DeckGroup g = deck_group(0.2, Complex(0.5, 0.0));
        const double via_product = 1.0 - myrberg_quotient(g, 1e-9);
        CHECK_THAT(myrberg_defect(g), WithinRel(via_product, 1e-9));
    }

    SECTION("large-modulus annuli keep tiny defects alive") {
        // at q = 0.5 the whole product sits within 1e-11 of 1; the expm1
        // route still reports a positive defect dominated by the n = 1 pair
        const DeckGroup g = deck_group(0.5, Complex(0.9, 0.0));
        const double defect = myrberg_defect(g);
        CHECK(defect > 0.0);
        CHECK(defect < 1e-12);
        CHECK_THAT(defect, WithinRel(g.one_minus_factor_sq(1), 1e-6));
    }

    SECTION("defect shrinks toward the boundary") {
        double prev = myrberg_defect(deck_group(0.2, Complex(0.5, 0.0)));
        for (const double r : {0.7, 0.9, 0.99}) {
            const double cur = myrberg_defect(deck_group(0.2, Complex(r, 0.0)));
            CHECK(cur < prev);
            CHECK(cur > 0.0);
            prev = cur;
        }
    }

    SECTION("evaluator plumbing and the trivial group") {
        CHECK(myrberg_defect(DeckGroup::trivial()) == 0.0);
        const MetricEvaluator m(annulus(0.2), 256);
        const Complex z(0.5, 0.0);
        CHECK_THAT(m.quotient_defect(z), WithinRel(1.0 - m.quotient(z), 1e-6));
        const MetricEvaluator disk(unit_disk(), 128);
        CHECK(disk.quotient_defect(Complex(0.3, 0.1)) == 0.0);
        CHECK_THROWS_AS(myrberg_defect(deck_group(0.2, Complex(0.5, 0.0)), 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("domain monotonicity of the kobayashi density", "[metrics]") {
    SECTION("nested disks, closed forms") {
        for (const Complex z : {Complex(0.2, 0.0), Complex(0.0, 0.4)}) {
            const double small = 1.0 / (1.0 - std::norm(z));
            const double big = 2.0 / (4.0 - std::norm(z));
            CHECK(small > big);
            CHECK_THAT(kobayashi(unit_disk(), z, 128).value, WithinAbs(small, 1e-10));
            CHECK_THAT(kobayashi(PlanarDomain(BoundaryCurve::circle(2.0)), z, 128).value,
                       WithinAbs(big, 1e-10));
        }
    }

    SECTION("annulus inside its disk") {
        const MetricEvaluator ring(annulus(0.2), 256);
        const MetricEvaluator disk(unit_disk(), 128);
        for (const Complex z : {Complex(0.5, 0.0), Complex(0.0, -0.62), Complex(0.3, 0.3)})
            CHECK(ring.kobayashi(z).value >= disk.kobayashi(z).value - 1e-9);
    }
}

TEST_CASE("ball metric in the radial directions", "[metrics]") {
    using V = std::vector<Complex>;
    CHECK(ball_kobayashi(2, V{0.0, 0.0}, V{1.0, 0.0}) == 1.0);
    CHECK(ball_kobayashi(3, V{0.0, 0.0, 0.0}, V{0.0, Complex(0.0, 1.0), 0.0}) == 1.0);

    SECTION("slice through the first axis is a disk") {
        for (const double delta : {0.5, 0.1, 0.01, 1e-4}) {
            const double x = 1.0 - delta;
            const double v = ball_kobayashi(2, V{x, 0.0}, V{1.0, 0.0});
            CHECK_THAT(v, WithinAbs(1.0 / (delta * (2.0 - delta)), 1e-9 * v));
            CHECK_THAT(v, WithinAbs(disk_density(Complex(x, 0.0)), 1e-12 * v));
        }
    }

    SECTION("complex multiples of z count as radial") {
        const V z{Complex(0.3, 0.2), Complex(-0.1, 0.4)};
        const V v{Complex(0.3, 0.2) * Complex(0.0, 2.0), Complex(-0.1, 0.4) * Complex(0.0, 2.0)};
        double z2 = 0.0;
        for (const Complex c : z) z2 += std::norm(c);
        CHECK_THAT(ball_kobayashi(2, z, v), WithinAbs(2.0 * std::sqrt(z2) / (1.0 - z2), 1e-13));
    }

    SECTION("rejections") {
        CHECK_THROWS_AS(ball_kobayashi(2, V{0.3, 0.1}, V{0.1, 0.5}), std::invalid_argument);
        CHECK_THROWS_AS(ball_kobayashi(2, V{1.0, 0.0}, V{1.0, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(ball_kobayashi(2, V{0.0}, V{1.0, 0.0}), std::invalid_argument);
    }
}
