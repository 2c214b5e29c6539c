#include "halfline/error.hpp"
#include "halfline/quadrature.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace halfline;

namespace {

const RuleSpec trapezoid{QuadratureRule::trapezoid, 0};

RuleSpec gauss(int p) {
    return {QuadratureRule::gauss_legendre, p};
}

void expect_grid_invariants(const HalfLineGrid& g) {
    const auto x = g.nodes();
    const auto w = g.weights();
    ASSERT_EQ(x.size(), w.size());
    ASSERT_FALSE(x.empty());
    EXPECT_GE(x.front(), 0.0);
    EXPECT_LE(x.back(), g.x_max());
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_GT(w[i], 0.0);
        if (i > 0) {
            EXPECT_GT(x[i], x[i - 1]);
        }
    }
    std::vector<double> ones(x.size(), 1.0);
    EXPECT_NEAR(integrate(g, ones) / g.x_max(), 1.0, 1e-12);
}

} // namespace

TEST(Quadrature, TrapezoidTwoPanelsClosedForm) {
    const auto g = build_grid(1.0, 2, trapezoid);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g.nodes()[0], 0.0);
    EXPECT_EQ(g.nodes()[1], 0.5);
    EXPECT_EQ(g.nodes()[2], 1.0);
    EXPECT_EQ(g.weights()[0], 0.25);
    EXPECT_EQ(g.weights()[1], 0.5);
    EXPECT_EQ(g.weights()[2], 0.25);
}

TEST(Quadrature, TrapezoidConstant) {
    const auto g = build_grid(10.0, 1, trapezoid);
    EXPECT_NEAR(integrate_fn(g, [](double) { return 1.0; }), 10.0, 1e-12);
}

TEST(Quadrature, TrapezoidLinearExact) {
    const auto g = build_grid(1.0, 2, trapezoid);
    EXPECT_NEAR(integrate_fn(g, [](double x) { return x; }), 0.5, 1e-15);
}

TEST(Quadrature, ZeroSamplesGiveZero) {
    const auto g = build_grid(3.0, 7, gauss(4));
    std::vector<double> zeros(g.size(), 0.0);
    EXPECT_EQ(integrate(g, zeros), 0.0);
}

TEST(Quadrature, FivePointGaussIntegratesDegreeNine) {
    const auto g = build_grid(1.0, 1, gauss(5));
    EXPECT_NEAR(integrate_fn(g, [](double x) { return std::pow(x, 9); }), 0.1, 1e-15);
}

TEST(Quadrature, GaussExactUpToDegree2pMinus1) {
    for (int p = 1; p <= 12; ++p) {
        const auto g = build_grid(1.0, 1, gauss(p));
        ASSERT_EQ(g.size(), static_cast<std::size_t>(p));
        for (int k = 0; k <= 2 * p - 1; ++k) {
            const double v = integrate_fn(g, [k](double x) { return std::pow(x, k); });
            EXPECT_NEAR(v, 1.0 / (k + 1), 2e-15) << "p=" << p << " k=" << k;
        }
    }
}

TEST(Quadrature, GaussLegendreReferenceNodes) {
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre(3, x, w);
    ASSERT_EQ(x.size(), 3u);
    EXPECT_NEAR(x[0], -std::sqrt(0.6), 1e-15);
    EXPECT_NEAR(x[1], 0.0, 1e-15);
    EXPECT_NEAR(x[2], std::sqrt(0.6), 1e-15);
    EXPECT_NEAR(w[0], 5.0 / 9.0, 1e-15);
    EXPECT_NEAR(w[1], 8.0 / 9.0, 1e-15);
}

TEST(Quadrature, NodeCounts) {
    EXPECT_EQ(build_grid(5.0, 7, trapezoid).size(), 8u);
    EXPECT_EQ(build_grid(5.0, 7, gauss(4)).size(), 28u);
}

TEST(Quadrature, GridInvariantsAcrossRules) {
    for (int panels : {1, 2, 5, 64, 400}) {
        for (double x_max : {0.5, 1.0, 40.0}) {
            expect_grid_invariants(build_grid(x_max, panels, trapezoid));
            for (int p : {1, 2, 4, 8}) {
                expect_grid_invariants(build_grid(x_max, panels, gauss(p)));
            }
        }
    }
}

TEST(Quadrature, GaussNodesAvoidEndpoints) {
    const auto g = build_grid(40.0, 400, gauss(4));
    EXPECT_GT(g.nodes().front(), 0.0);
    EXPECT_LT(g.nodes().back(), 40.0);
}

TEST(Quadrature, HalfGaussianMass) {
    const auto g = build_grid(40.0, 800, gauss(4));
    const double v = integrate_fn(g, [](double y) { return std::exp(-y * y) / std::sqrt(M_PI); });
    EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(Quadrature, RefinementLadder) {
    const auto f = [](double x) { return std::exp(-x) * std::cos(x); };
    const double exact = 0.5 * (1.0 - std::exp(-5.0) * (std::cos(5.0) - std::sin(5.0)));
    double prev_t = 0.0;
    double prev_g = 0.0;
    for (int level = 0; level < 3; ++level) {
        const int panels = 10 << level;
        const double et = std::abs(integrate_fn(build_grid(5.0, panels, trapezoid), f) - exact);
        const double eg = std::abs(integrate_fn(build_grid(5.0, panels, gauss(2)), f) - exact);
        if (level > 0) {
            // Second order for the trapezoid rule, fourth for two-point Gauss.
            EXPECT_NEAR(prev_t / et, 4.0, 0.2);
            EXPECT_NEAR(prev_g / eg, 16.0, 1.0);
        }
        EXPECT_LT(eg, et);
        prev_t = et;
        prev_g = eg;
    }
}

TEST(Quadrature, IntervalGrid) {
    const auto g = build_interval_grid(2.0, 5.0, 3, gauss(4));
    EXPECT_EQ(g.x_max(), 5.0);
    EXPECT_GT(g.nodes().front(), 2.0);
    EXPECT_NEAR(integrate_fn(g, [](double x) { return x * x; }), (125.0 - 8.0) / 3.0, 1e-12);
}

TEST(Quadrature, Deterministic) {
    const auto g = build_grid(40.0, 400, gauss(4));
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = std::sin(g.nodes()[i]) * std::exp(-0.1 * g.nodes()[i]);
    }
    const double a = integrate(g, s);
    const double b = integrate(build_grid(40.0, 400, gauss(4)), s);
    EXPECT_EQ(a, b);
}

TEST(Quadrature, Errors) {
    using halfline::testing::thrown_kind;
    const auto kind = [](auto&& f) { return thrown_kind(f); };
    EXPECT_EQ(kind([] { build_grid(0.0, 4); }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind([] { build_grid(-1.0, 4); }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind([] { build_grid(1.0, 0); }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind([] { build_grid(1.0, -3); }), ErrorKind::invalid_argument);
    const auto g = build_grid(1.0, 2);
    std::vector<double> wrong(g.size() + 1, 1.0);
    EXPECT_EQ(kind([&] { integrate(g, wrong); }), ErrorKind::invalid_argument);
}
