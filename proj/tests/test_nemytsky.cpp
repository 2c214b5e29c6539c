#include "halfline/nemytsky.hpp"
#include "halfline/picard.hpp"
#include "halfline/quadrature.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace halfline;
using halfline::testing::catalog_g;
using halfline::testing::catalog_kernel;
using halfline::testing::thrown_kind;

namespace {

struct Fixture {
    HalfLineGrid grid;
    OperatorMatrix a;
    SolveReport picard;
};

Fixture make_fixture(std::size_t panels) {
    auto grid = build_grid(40.0, panels);
    auto a = assemble_operator(catalog_kernel(KernelFamily::C), grid);
    auto r = solve_picard(a, catalog_g(GFamily::I));
    return {std::move(grid), std::move(a), std::move(r)};
}

const Fixture& catalog() {
    static const Fixture f = make_fixture(400);
    return f;
}

NemytskySpec base_spec() {
    NemytskySpec s;
    s.base_g = catalog_g(GFamily::I);
    return s;
}

NemytskyForms forms_for(const NemytskySpec& s, const Fixture& f = catalog()) {
    return NemytskyForms(s, f.grid.nodes(), f.a.gamma());
}

} // namespace

TEST(NemytskyForms, G0AtLowerEnvelope) {
    const auto f = forms_for(base_spec());
    const auto gamma = f.gamma();
    for (std::size_t i = 0; i < gamma.size(); i += 97) {
        const double s = 0.25 * gamma[i];
        EXPECT_NEAR(f.g0(i, s), s, 1e-16 + 1e-15 * s);
        EXPECT_EQ(f.g0(i, 0.0), 0.0);
    }
}

TEST(NemytskyForms, G0ZeroByConventionWhenGammaVanishes) {
    const std::vector<double> nodes{0.0, 1.0};
    const std::vector<double> gamma{0.0, -1e-18};
    const NemytskyForms f(base_spec(), nodes, gamma);
    EXPECT_EQ(f.g0(0, 0.0), 0.0);
    EXPECT_EQ(f.g0(1, 0.0), 0.0);
    EXPECT_EQ(f.g0(0, 0.5), 0.0);
}

TEST(NemytskyForms, G2WithZeroFractionEqualsG1) {
    auto s2 = base_spec();
    s2.g0 = G0Family::g2;
    s2.eps_star_fraction = 0.0;
    const auto f1 = forms_for(base_spec());
    const auto f2 = forms_for(s2);
    for (std::size_t i = 0; i < f1.gamma().size(); i += 53) {
        for (double u : {0.0, 1e-6, 0.1, 0.5, 1.0}) {
            EXPECT_EQ(f1.g0(i, u), f2.g0(i, u));
        }
    }
}

TEST(NemytskyForms, G3Values) {
    const auto f = forms_for(base_spec());
    EXPECT_NEAR(f.g1(0, 0.75), 0.5, 1e-15);
    EXPECT_EQ(f.g1(0, 0.0), 0.0);
    EXPECT_EQ(f.g1(0, 1.0), 1.0);
}

TEST(NemytskyForms, G4WithUnitLEqualsG3) {
    auto s4 = base_spec();
    s4.g1 = G1Family::g4;
    s4.l_profile = {LProfile::Kind::constant, 1.0};
    const auto f3 = forms_for(base_spec());
    const auto f4 = forms_for(s4);
    for (std::size_t i = 0; i < f3.gamma().size(); i += 211) {
        for (double u : {0.0, 0.1, 0.5, 0.75, 1.0}) {
            EXPECT_EQ(f3.g1(i, u), f4.g1(i, u));
        }
    }
}

TEST(NemytskyForms, LProfileExpRise) {
    const LProfile l{LProfile::Kind::exp_rise, 0.25};
    EXPECT_EQ(l(0.0), 0.25);
    EXPECT_NEAR(l(1.0), 1.0 - 0.75 * std::exp(-1.0), 1e-16);
    EXPECT_NEAR(l(50.0), 1.0, 1e-16);
}

TEST(NemytskyForms, RangeErrors) {
    const auto f = forms_for(base_spec());
    EXPECT_EQ(thrown_kind([&] { f.g0(0, -1e-3); }), ErrorKind::invalid_argument);
    EXPECT_EQ(thrown_kind([&] { f.g1(0, 1.001); }), ErrorKind::invalid_argument);
}

TEST(NemytskySpecValidation, Xi) {
    auto s = base_spec();
    for (double xi : {0.0, 0.5, 0.7, -0.1}) {
        s.xi = xi;
        EXPECT_EQ(thrown_kind([&] { validate(s); }), ErrorKind::spec_invalid) << xi;
    }
    s.xi = 0.4999;
    EXPECT_NO_THROW(validate(s));
    s.eps_star_fraction = 1.5;
    EXPECT_EQ(thrown_kind([&] { validate(s); }), ErrorKind::spec_invalid);
    s.eps_star_fraction = 1.0;
    s.l_profile.value = -0.1;
    EXPECT_EQ(thrown_kind([&] { validate(s); }), ErrorKind::spec_invalid);
}

TEST(NemytskyConditions, CatalogPasses) {
    const auto r = check_nemytsky_conditions(forms_for(base_spec()), 200, 1e-12);
    EXPECT_TRUE(r.passed());
    EXPECT_GE(r.a1_upper_margin, 0.0);
    EXPECT_GE(r.a1_lower_margin, -1e-16);
    EXPECT_EQ(r.criticality, 0.0);
    // g3 is the envelope itself.
    EXPECT_EQ(r.a3_min_margin, 0.0);
}

TEST(NemytskyConditions, A1UpperReducesToXiBound) {
    // 2ξγη/(η+ξγ) <= ηγ  <=>  2ξ <= η + ξγ
    const auto f = forms_for(base_spec());
    for (std::size_t i = 0; i < f.gamma().size(); ++i) {
        const double g = f.gamma()[i];
        EXPECT_LE(f.g0(i, 1.0), g * (1.0 + 1e-15));
    }
}

TEST(NemytskyConditions, G2HalfBoundPassesAndOverBoundFails) {
    auto s = base_spec();
    s.g0 = G0Family::g2;
    s.eps_star_fraction = 0.5;
    const auto half = forms_for(s);
    const auto ok = check_nemytsky_conditions(half, 200, 1e-12);
    EXPECT_TRUE(ok.eps_star_ok);
    EXPECT_TRUE(ok.passed());

    std::vector<double> eps(half.eps_star().begin(), half.eps_star().end());
    const std::size_t bad = 137;
    eps[bad] = 1.1 * half.eps_star_bound(bad);
    const NemytskyForms over(s, catalog().grid.nodes(), catalog().a.gamma(), eps);
    const auto r = check_nemytsky_conditions(over, 200, 1e-12);
    EXPECT_FALSE(r.eps_star_ok);
    EXPECT_EQ(r.eps_star_first_bad_node, static_cast<long>(bad));
    EXPECT_FALSE(r.passed());
}

TEST(NemytskyConditions, LatticeTooSmall) {
    EXPECT_EQ(thrown_kind([&] { check_nemytsky_conditions(forms_for(base_spec()), 2, 1e-12); }),
              ErrorKind::invalid_argument);
}

TEST(NemytskySolve, CatalogSandwich) {
    const auto& f = catalog();
    const auto forms = forms_for(base_spec());
    const auto r = solve_nemytsky(forms, f.a, f.picard.defect);
    EXPECT_TRUE(r.converged);
    EXPECT_TRUE(r.increasing_ok);
    EXPECT_LE(r.max_decrease, 1e-12);
    EXPECT_GE(r.sandwich_lower_margin, -1e-10);
    EXPECT_GE(r.sandwich_upper_margin, -1e-10);
    EXPECT_LE(r.phi_tail, 1e-6);
    EXPECT_LE(r.residual_inf, 2e-10);
    for (std::size_t i = 0; i < r.profile.size(); ++i) {
        ASSERT_GE(r.profile[i], 0.25 * forms.gamma()[i] - 1e-10);
        ASSERT_LE(r.profile[i], 1.0 - f.picard.profile[i] + 1e-10);
    }
    EXPECT_GT(r.phi_integral, 0.0);
    EXPECT_TRUE(std::isfinite(r.phi_integral));
}

TEST(NemytskySolve, FirstIterateAboveStart) {
    const auto& f = catalog();
    NemytskyOptions o;
    o.max_iter = 1;
    try {
        solve_nemytsky(forms_for(base_spec()), f.a, f.picard.defect, o);
        FAIL() << "one step should not converge";
    } catch (const NemytskyNonConvergence& e) {
        const auto& p = e.partial();
        ASSERT_EQ(p.iterations, 1);
        for (std::size_t i = 0; i < p.profile.size(); ++i) {
            ASSERT_GE(p.profile[i], p.lower_envelope[i]);
        }
    }
}

TEST(NemytskySolve, VanishingGammaRejected) {
    const auto& f = catalog();
    const std::vector<double> zero(f.a.size(), 0.0);
    const NemytskyForms forms(base_spec(), f.grid.nodes(), zero);
    EXPECT_EQ(thrown_kind([&] { solve_nemytsky(forms, f.a, f.picard.defect); }), ErrorKind::spec_rejected);
}

TEST(NemytskySolve, SizeMismatch) {
    const auto& f = catalog();
    const std::vector<double> short_defect(10, 0.5);
    EXPECT_EQ(thrown_kind([&] { solve_nemytsky(forms_for(base_spec()), f.a, short_defect); }),
              ErrorKind::invalid_argument);
}

TEST(NemytskySolve, EnvelopeViolationIsBreakdown) {
    const auto& f = catalog();
    // Below Φ_0 = ξγ, so the first iterate already crosses it.
    std::vector<double> tight(f.a.size());
    for (std::size_t i = 0; i < tight.size(); ++i) {
        tight[i] = 0.1 * f.a.gamma()[i];
    }
    EXPECT_EQ(thrown_kind([&] { solve_nemytsky(forms_for(base_spec()), f.a, tight); }),
              ErrorKind::numerical_breakdown);
}

TEST(NemytskySolve, VariantsKeepSandwich) {
    const auto& f = catalog();
    NemytskySpec s = base_spec();
    s.g0 = G0Family::g2;
    s.eps_star_fraction = 0.8;
    s.g1 = G1Family::g4;
    s.l_profile = {LProfile::Kind::exp_rise, 0.3};
    const auto r = solve_nemytsky(forms_for(s), f.a, f.picard.defect);
    EXPECT_TRUE(r.converged && r.increasing_ok);
    EXPECT_GE(r.sandwich_lower_margin, -1e-10);
    EXPECT_GE(r.sandwich_upper_margin, -1e-10);
    EXPECT_LE(r.residual_inf, 2e-10);
}

TEST(NemytskySolve, IntegralStableUnderPanelDoubling) {
    const auto coarse = make_fixture(400);
    const auto fine = make_fixture(800);
    const auto rc = solve_nemytsky(forms_for(base_spec(), coarse), coarse.a, coarse.picard.defect);
    const auto rf = solve_nemytsky(forms_for(base_spec(), fine), fine.a, fine.picard.defect);
    EXPECT_NEAR(rc.phi_integral, rf.phi_integral, 1e-8);
}

TEST(NemytskySolve, ThreadsDoNotChangeResult) {
    const auto& f = catalog();
    NemytskyOptions o;
    o.threads = 3;
    const auto r1 = solve_nemytsky(forms_for(base_spec()), f.a, f.picard.defect);
    const auto r3 = solve_nemytsky(forms_for(base_spec()), f.a, f.picard.defect, o);
    EXPECT_EQ(r1.profile, r3.profile);
    EXPECT_EQ(r1.iterations, r3.iterations);
}
