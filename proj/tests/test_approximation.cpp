#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace fgwc;

namespace {

const HypothesisResult& hypothesis(const InvariantApproxReport& r, const std::string& name) {
    for (const auto& h : r.hypotheses) {
        if (h.name == name) return h;
    }
    throw std::out_of_range(name);
}

CompactSet random_set(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_int_distribution<int> count(1, 4);
    std::vector<Interval> ivs;
    for (int i = count(rng); i > 0; --i) {
        double a = u(rng);
        double b = u(rng);
        if (a > b) std::swap(a, b);
        ivs.push_back(Interval::closed(a, b));
    }
    return CompactSet(Domain(std::move(ivs)));
}

}  // namespace

TEST(CompactSet, RequiresClosedIntervals) {
    EXPECT_THROW(CompactSet(Domain({Interval::left_open(0, 1)})), std::invalid_argument);
    EXPECT_NO_THROW(CompactSet({Interval::closed(0, 1), Interval::point(3)}));
}

TEST(BestApprox, Examples) {
    const auto r1 = best_approx(CompactSet{Interval::closed(0, 1)}, 2.0);
    EXPECT_EQ(r1.dist, 1.0);
    EXPECT_EQ(r1.points, (std::vector<double>{1.0}));

    const auto r2 = best_approx(CompactSet{Interval::closed(0, 0.25), Interval::closed(0.75, 1)}, 0.5);
    EXPECT_EQ(r2.dist, 0.25);
    EXPECT_EQ(r2.points, (std::vector<double>{0.25, 0.75}));

    const auto r3 = best_approx(CompactSet{Interval::closed(0, 1)}, 0.3);
    EXPECT_EQ(r3.dist, 0.0);
    EXPECT_EQ(r3.points, (std::vector<double>{0.3}));

    EXPECT_THROW(best_approx(CompactSet{}, 0.0), EmptySet);
}

TEST(BestApprox, RandomSetsAgainstBruteForce) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-15.0, 15.0);
    const GridSpec grid{2001};
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_set(rng);
        const double x = u(rng);
        const auto r = best_approx(m, x);
        ASSERT_FALSE(r.points.empty());
        double brute = INFINITY;
        double spacing = 0.0;
        for (const auto& iv : m.domain().intervals()) spacing = std::max(spacing, iv.length() / 2000.0);
        for (double p : sample_grid(m.domain(), grid)) brute = std::min(brute, std::abs(p - x));
        EXPECT_LE(r.dist, brute + 1e-12);
        EXPECT_GE(r.dist, brute - spacing - 1e-12);
        for (double p : r.points) {
            EXPECT_TRUE(m.contains(p));
            EXPECT_NEAR(std::abs(p - x), r.dist, 1e-10);
        }
        if (m.contains(x)) {
            EXPECT_EQ(r.dist, 0.0);
            EXPECT_EQ(r.points, (std::vector<double>{x}));
        }
    }
}

TEST(BestApprox, DistanceIsOneLipschitz) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-15.0, 15.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = random_set(rng);
        const double a = u(rng);
        const double b = u(rng);
        EXPECT_LE(std::abs(best_approx(m, a).dist - best_approx(m, b).dist), std::abs(a - b) + 1e-12);
    }
}

TEST(Invariance, Examples) {
    const CompactSet unit{Interval::closed(0, 1)};
    EXPECT_TRUE(check_invariance(PiecewiseMap::identity(unit.domain()), unit, GridSpec{}).passed);

    const auto f = fixtures::quarter_maps().f;
    const auto r = check_invariance(f, CompactSet{Interval::closed(2.0 / 3.0, 1)}, GridSpec{});
    ASSERT_FALSE(r.passed);
    EXPECT_EQ(r.witness->x, 1.0);
    EXPECT_NEAR(r.witness->lhs, 1.0 / 3.0, 1e-15);

    const auto t = fixtures::halving_maps().t;
    EXPECT_TRUE(check_invariance(t, CompactSet{Interval::closed(0, 0.5)}, GridSpec{}).passed);
}

TEST(Invariance, FinitePointSets) {
    const auto t = fixtures::halving_maps().t;
    EXPECT_TRUE(check_invariance(t, std::vector<double>{0.0}).passed);
    const auto r = check_invariance(t, std::vector<double>{0.0, 0.5});
    ASSERT_FALSE(r.passed);
    EXPECT_EQ(r.witness->x, 0.5);
}

TEST(StrictGap, ConstantTargetFailsOnLeftHalf) {
    const auto unit = Interval::closed(0, 1);
    const PiecewiseMap t("T", {Branch(unit, Constant{0.5})});
    const auto id = PiecewiseMap::affine(unit, 1.0, 0.0, "id");
    BestApproxResult pm;
    pm.u = 0.25;
    pm.points = {0.25};
    const auto gap = check_strict_gap(t, id, id, pm, GridSpec{401});
    EXPECT_FALSE(gap.check.passed);
    ASSERT_TRUE(gap.first_violation_x && gap.last_violation_x);
    // |x - 1/2| >= |x - 1/4| exactly when x <= 3/8.
    EXPECT_EQ(*gap.first_violation_x, 0.0);
    EXPECT_NEAR(*gap.last_violation_x, 0.375, 1e-12);
    const auto w = gap.check.witness;
    ASSERT_TRUE(w);
    EXPECT_LE(w->x, 0.375);
}

TEST(StrictGap, FixedPointTargetCannotBeStrict) {
    const auto m = fixtures::halving_maps();
    BestApproxResult pm;
    pm.points = {0.0};
    const auto gap = check_strict_gap(m.t, m.f, m.g, pm, GridSpec{101});
    EXPECT_FALSE(gap.check.passed);
    EXPECT_EQ(*gap.first_violation_x, 0.0);
    EXPECT_EQ(*gap.last_violation_x, 1.0);
}

TEST(StrictGap, AveragingTowardTheTarget) {
    // T(x) = (x + 1/2)/2 with a = 1/2: Ta = fa = ga = a, so d(x, Ta) = d(x, fa)
    // for every x and the strict hypothesis fails everywhere, including x = a.
    const auto unit = Interval::closed(0, 1);
    const auto t = PiecewiseMap::affine(unit, 0.5, 0.25, "T");
    const auto id = PiecewiseMap::affine(unit, 1.0, 0.0, "id");
    BestApproxResult pm;
    pm.points = {0.5};
    const auto gap = check_strict_gap(t, id, id, pm, GridSpec{101});
    EXPECT_FALSE(gap.check.passed);
    EXPECT_EQ(gap.check.violations, 101u);
    EXPECT_EQ(*gap.first_violation_x, 0.0);
    EXPECT_EQ(*gap.last_violation_x, 1.0);
}

TEST(InvariantApproximation, FixedStartInsideSetHolds) {
    const auto m = fixtures::halving_maps();
    const auto r = verify_invariant_approximation(m.t, m.f, m.g, CompactSet{Interval::closed(0, 0.5)}, 0.0,
                                                  PsiFunction::half_linear(), GridSpec{});
    EXPECT_EQ(r.best.points, (std::vector<double>{0.0}));
    EXPECT_TRUE(r.all_hypotheses_hold()) << r.failed_hypotheses().size();
    EXPECT_TRUE(r.conclusion_holds);
    EXPECT_EQ(*r.z, 0.0);
}

TEST(InvariantApproximation, StartOutsideFixedPointsIsReported) {
    const auto m = fixtures::halving_maps();
    const auto r = verify_invariant_approximation(m.t, m.f, m.g, CompactSet{Interval::closed(0, 0.5)}, 1.0,
                                                  PsiFunction::half_linear(), GridSpec{});
    EXPECT_EQ(r.failed_hypotheses(), (std::vector<std::string>{"x0_common_fixed_point"}));
    EXPECT_FALSE(r.conclusion_holds);
    EXPECT_EQ(r.best.points, (std::vector<double>{0.5}));
    EXPECT_DOUBLE_EQ(r.residual, 0.25);
}

TEST(InvariantApproximation, IdentityMaps) {
    const Domain unit({Interval::closed(0, 1)});
    const auto id = PiecewiseMap::identity(unit);
    const auto r = verify_invariant_approximation(id, id, id, CompactSet{Interval::closed(0, 0.5)}, 0.75,
                                                  PsiFunction::half_linear(), GridSpec{51});
    // |x - y| <= |x - y| - psi(|x - y|) fails for every x != y.
    EXPECT_EQ(r.failed_hypotheses(), (std::vector<std::string>{"fg_weakly_contractive"}));
    EXPECT_TRUE(hypothesis(r, "x0_common_fixed_point").passed);
    EXPECT_TRUE(r.conclusion_holds);
    EXPECT_EQ(*r.z, 0.5);
}

TEST(InvariantApproximation, InvarianceFailureNamed) {
    const auto m = fixtures::quarter_maps();
    const auto r = verify_invariant_approximation(m.t, m.f, m.g, CompactSet{Interval::closed(2.0 / 3.0, 1)},
                                                  2.0 / 3.0, PsiFunction::power_ratio(), GridSpec{});
    EXPECT_FALSE(hypothesis(r, "f_invariant_M").passed);
    EXPECT_FALSE(hypothesis(r, "T_invariant_M").passed);
    EXPECT_TRUE(hypothesis(r, "x0_common_fixed_point").passed);
    EXPECT_TRUE(hypothesis(r, "fg_weakly_contractive").passed);
    EXPECT_TRUE(r.conclusion_holds);
}
