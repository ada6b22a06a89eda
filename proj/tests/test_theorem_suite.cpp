#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ratiolab/theorem_suite.hpp"

using namespace ratiolab;

namespace {

const Complex I{0.0, 1.0};

const TheoremReport& find(const std::vector<TheoremReport>& reps, ClaimId id)
{
    for (const auto& r : reps)
        if (r.claim == id)
            return r;
    throw std::runtime_error("claim missing");
}

ScanRange small_scan()
{
    return ScanRange{kSqrt3, 1e3, 20'000, 1e9, 200};
}

}  // namespace

TEST(CheckBounds, RealCase)
{
    const auto reps = check_bounds(ratios_direct(order_roots(-1.0, 0.0, 1.0)));
    ASSERT_EQ(reps.size(), 7u);
    for (const auto& r : reps) {
        EXPECT_TRUE(r.passed) << to_string(r.claim);
        EXPECT_FALSE(r.witness.has_value());
    }
    EXPECT_NEAR(find(reps, ClaimId::T3).margin, 2.0 * kSqrt3 / 3.0 - 1.0, 1e-15);
}

TEST(CheckBounds, EquilateralHasZeroT3Margin)
{
    const auto reps = check_bounds(ratios_direct(order_roots(-1.0, kSqrt3 * I, 1.0)));
    EXPECT_NEAR(find(reps, ClaimId::T3).margin, 0.0, 1e-15);
    EXPECT_TRUE(find(reps, ClaimId::T3).passed);
}

TEST(CheckBounds, ExtremalFamilyTouchesImBound)
{
    const auto p = extremal_family_im(Complex{1.0, -4.0}, 0.0, ImSign::Upper);
    const auto reps = check_bounds(p.ratios);
    EXPECT_NEAR(find(reps, ClaimId::T1B).margin, 0.0, 1e-15);
    EXPECT_TRUE(find(reps, ClaimId::T1B).passed);
}

TEST(CheckBounds, FailureCarriesWitness)
{
    const auto reps = check_bounds(RatioVector{Complex(-0.1, 0.5), Complex(2.0, 0.0), RatioPath::Direct});
    for (const auto& r : reps) {
        if (!r.passed) {
            ASSERT_TRUE(r.witness.has_value());
            EXPECT_FALSE(r.witness->bounds_ok);
        }
    }
    EXPECT_FALSE(find(reps, ClaimId::T1A).passed);
    EXPECT_FALSE(find(reps, ClaimId::T1B).passed);
    EXPECT_FALSE(find(reps, ClaimId::T2A).passed);
}

TEST(Lemma1, PointValuesAndScan)
{
    auto a = [](double t) { return 4.0 * t * std::sqrt(std::max(0.0, t * t - 3.0)) - 5.0 * t * t + 3.0; };
    EXPECT_NEAR(a(2.0), -9.0, 1e-14);
    EXPECT_NEAR(a(kSqrt3), -12.0, 1e-12);
    EXPECT_DOUBLE_EQ(16.0 * 4.0 * 1.0 - 17.0 * 17.0, -9.0 * 25.0);

    const auto reps = scan_lemma1(small_scan());
    for (const auto& r : reps) {
        EXPECT_TRUE(r.passed) << r.detail;
        EXPECT_GT(r.margin, 3.0);
    }
}

TEST(Lemma2, PointValuesAndRoots)
{
    auto h = [](double t) { return t * t * t - 7.0 * t - 2.0 * (t * t - 1.0) * std::sqrt(t * t - 3.0); };
    EXPECT_NEAR(h(-2.0), 0.0, 1e-14);
    EXPECT_NEAR(h(2.0), -12.0, 1e-14);
    EXPECT_DOUBLE_EQ((27.0 - 21.0) * (27.0 - 21.0) - 4.0 * 64.0 * 6.0, -3.0 * 1.0 * 5.0 * 100.0);

    const auto reps = scan_lemma2(small_scan());
    EXPECT_TRUE(reps[0].passed) << reps[0].detail;
    EXPECT_TRUE(reps[1].passed) << reps[1].detail;
    EXPECT_NE(reps[0].detail.find("[-2]"), std::string::npos) << reps[0].detail;
    EXPECT_NE(reps[1].detail.find("[2]"), std::string::npos) << reps[1].detail;
}

TEST(Lemmas, BadRange)
{
    EXPECT_THROW(scan_lemma1(1.0, 10.0, 5000), Error);
    EXPECT_THROW(scan_lemma2(5.0, 4.0, 5000), Error);
    EXPECT_THROW(scan_lemma1(2.0, 10.0, 10), Error);
    try {
        scan_lemma1(1.0, 10.0, 5000);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BadRange);
    }
}

TEST(Sharpness, ReFamily)
{
    EXPECT_GE(sharpness_probe_re(100.0).ratios.sigma1.real(), 0.66);
    EXPECT_LE(sharpness_probe_re(-100.0).ratios.sigma1.real(), 0.01);
    EXPECT_NEAR(std::abs(sharpness_probe_re(2.0).ratios.sigma1 - Complex(0.6, -0.2)), 0.0, 1e-14);
    EXPECT_GT(sharpness_probe_re(1e3).ratios.sigma1.real(), 0.666);
    EXPECT_LT(sharpness_probe_re(-1e3).ratios.sigma1.real(), 1e-4);
    EXPECT_THROW(sharpness_probe_re(1.0), Error);

    double prev = 0.0;
    for (double t : {1e1, 1e2, 1e3, 1e4}) {
        const double re = sharpness_probe_re(t).ratios.sigma1.real();
        EXPECT_GT(re, prev);
        EXPECT_LT(re, 2.0 / 3.0);
        prev = re;
    }
}

TEST(Sharpness, NegativeFamilyFollowsBoundaryCurve)
{
    for (double t : {-2.0, -10.0, -1e3}) {
        const auto p = sharpness_probe_re(t);
        EXPECT_NEAR(normalize(p.cubic).w.imag(), t, 1e-9 * std::abs(t));
        EXPECT_NEAR(std::abs(p.ratios.sigma1 - boundary_sigma1(t)), 0.0, 1e-12);
    }
}

TEST(Extremal, ImFamily)
{
    auto p = extremal_family_im(Complex{1.0, -4.0}, 0.0, ImSign::Upper);
    EXPECT_EQ(p.cubic.w1, Complex(-4.0, -1.0));
    EXPECT_EQ(p.cubic.w2, Complex(2.0, -8.0));
    EXPECT_EQ(p.cubic.w3, Complex(4.0, 1.0));
    EXPECT_NEAR(std::abs(p.ratios.sigma1 - Complex(1.0, 1.0) / 3.0), 0.0, 1e-15);

    p = extremal_family_im(Complex{1.0, 4.0}, 0.0, ImSign::Lower);
    EXPECT_NEAR(p.ratios.sigma1.imag(), -1.0 / 3.0, 1e-15);

    p = extremal_family_im(Complex{0.7, -3.1}, Complex{5.0, -2.0}, ImSign::Upper);
    EXPECT_NEAR(p.ratios.sigma1.imag(), 1.0 / 3.0, 1e-12);

    try {
        extremal_family_im(Complex{-1.0, -4.0}, 0.0, ImSign::Upper);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConstraintViolated);
    }
}

TEST(Extremal, OtherSideOfFamilyGivesThreeFifths)
{
    // z0 = -1-4i: normalized w = -2i with Re w2 < 0.
    const auto r = extremal_family_roots(Complex{-1.0, -4.0}, 0.0);
    const OrderedCubic c = order_roots(r[0], r[1], r[2]);
    EXPECT_NEAR(std::abs(normalize(c).w + 2.0 * I), 0.0, 1e-15);
    const Complex s1 = ratios_direct(c).sigma1;
    EXPECT_NEAR(std::abs(s1 - Complex(0.6, 0.2)), 0.0, 1e-15);
}

TEST(Extremal, SecondRatioOnStatedFamilyIsOneFifth)
{
    const auto p = extremal_family_im(Complex{1.0, -4.0}, 0.0, ImSign::Upper);
    EXPECT_NEAR(std::abs(p.ratios.sigma2 - Complex(2.0, 1.0) / 5.0), 0.0, 1e-15);
    // Im sigma2 reaches -1/3 and +1/3 on w = 2i configurations instead.
    const Complex s = ratios_direct(order_roots(Complex{-4, -1}, Complex{-2, 8}, Complex{4, 1})).sigma2;
    EXPECT_NEAR(std::abs(s - Complex(2.0, -1.0) / 3.0), 0.0, 1e-15);
    const Complex m = ratios_direct(order_roots(Complex{-4, 1}, Complex{-2, -8}, Complex{4, -1})).sigma2;
    EXPECT_NEAR(m.imag(), 1.0 / 3.0, 1e-15);
}

TEST(Equivalences, T4)
{
    EXPECT_TRUE(check_equivalence_t4(order_roots(-1.0, kSqrt3 * I, 1.0)).passed);
    const auto r = check_equivalence_t4(order_roots(-1.0, 0.0, 1.0));
    EXPECT_TRUE(r.passed);
    EXPECT_GT(r.margin, 0.1);
    for (std::uint64_t k = 0; k < 2000; ++k) {
        const OrderedCubic c = draw_equilateral(1, k);
        ASSERT_TRUE(check_equivalence_t4(c).passed) << k;
        ASSERT_NEAR(std::abs(std::abs(normalize(c).w.imag()) - kSqrt3), 0.0, 1e-6);
    }
}

TEST(Equivalences, T5)
{
    EXPECT_TRUE(check_equivalence_t5(order_roots(-1.0, 0.0, 1.0)).passed);
    const auto eq = check_equivalence_t5(order_roots(-1.0, kSqrt3 * I, 1.0));
    EXPECT_TRUE(eq.passed);
    EXPECT_GT(eq.margin, 0.1);

    const Complex rot = std::polar(1.0, 0.01);
    const OrderedCubic line = order_roots(Complex(-1, -1) * rot, 0.0, Complex(1, 1) * rot);
    const auto rep = check_equivalence_t5(line);
    EXPECT_TRUE(rep.passed);
    EXPECT_LT(rep.margin, 1e-12);
    EXPECT_TRUE(scan_t5_boundary(small_scan()).passed);
}

TEST(Hyperbolic, Examples)
{
    EXPECT_TRUE(check_hyperbolic(order_roots(-1.0, 0.0, 1.0)).passed);
    EXPECT_TRUE(check_hyperbolic(order_roots(0.0, 1.0, 100.0)).passed);
    EXPECT_TRUE(check_hyperbolic(order_roots(0.0, 1.0, 1.0 + 1e-6)).passed);
    try {
        check_hyperbolic(order_roots(-1.0, Complex(0.0, 1.0), 1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHyperbolic);
    }
}

TEST(MonteCarlo, OracleAgreementAndDeterminism)
{
    const auto a = run_monte_carlo(5000, 99);
    const auto b = run_monte_carlo(5000, 99);
    EXPECT_EQ(a.max_oracle_diff, b.max_oracle_diff);
    EXPECT_EQ(a.stated_mismatches, b.stated_mismatches);
    EXPECT_LE(a.max_oracle_diff, 1e-9);
    EXPECT_LE(a.max_identity_residual, 1e-10);
    EXPECT_GT(a.boundary_samples, 0u);
    // Where f and g apply as written, the bounds hold.
    for (ClaimId c : kBoundClaims)
        EXPECT_EQ(a.tally_principal(c).failures, 0u) << to_string(c);
}

TEST(Suite, SelectorParsing)
{
    EXPECT_EQ(parse_selector("all"), Selector::All);
    EXPECT_EQ(parse_selector("HYP"), Selector::HYP);
    EXPECT_FALSE(parse_selector("T9").has_value());
}

TEST(Suite, ReportsCarryWitnessWhenFailing)
{
    SuiteOptions opt;
    opt.samples = 3000;
    opt.equivalence_samples = 500;
    opt.scan = small_scan();
    for (const auto& r : run_suite(Selector::All, opt)) {
        if (!r.passed) {
            EXPECT_TRUE(r.witness.has_value()) << to_string(r.claim);
        }
    }
}

TEST(Suite, SecondRatioExtremalClaimsAreFlagged)
{
    SuiteOptions opt;
    opt.samples = 200;
    opt.equivalence_samples = 200;
    const auto reps = run_suite(Selector::T2, opt);
    EXPECT_FALSE(find(reps, ClaimId::T2C).passed);
    EXPECT_FALSE(find(reps, ClaimId::T2D).passed);
    const auto& w = find(reps, ClaimId::T2C).witness;
    ASSERT_TRUE(w.has_value());
    EXPECT_NEAR(w->sigma2->imag(), 0.2, 1e-12);
}
