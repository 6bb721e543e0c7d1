#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace fgwc;

TEST(Real, ParsesRationalsAndDecimals) {
    EXPECT_DOUBLE_EQ(parse_real("4/3"), 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(parse_real("-1/2"), -0.5);
    EXPECT_DOUBLE_EQ(parse_real("0.25"), 0.25);
    EXPECT_DOUBLE_EQ(parse_real("1e-3"), 1e-3);
    EXPECT_THROW(parse_real("1/0"), ParseError);
    EXPECT_THROW(parse_real("abc"), ParseError);
    EXPECT_THROW(parse_real("1/2/3"), ParseError);
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}

TEST(Interval, MembershipRespectsOpenness) {
    const auto iv = Interval::left_open(0.25, 1.0);
    EXPECT_FALSE(iv.contains(0.25));
    EXPECT_TRUE(iv.contains(std::nextafter(0.25, 1.0)));
    EXPECT_TRUE(iv.contains(1.0));
    EXPECT_FALSE(iv.contains(1.0 + 1e-15));
    EXPECT_TRUE(Interval::point(0.5).contains(0.5));
}

TEST(Interval, RejectsInvalidBounds) {
    EXPECT_THROW(Interval(1.0, 0.0, true, true), std::invalid_argument);
    EXPECT_THROW(Interval(0.5, 0.5, true, false), std::invalid_argument);
    EXPECT_THROW(Interval(std::nan(""), 1.0, true, true), std::invalid_argument);
}

TEST(Domain, NormalizesTouchingIntervals) {
    const Domain d({Interval::closed(0.5, 1.0), Interval::right_open(0.0, 0.5)});
    ASSERT_EQ(d.intervals().size(), 1u);
    EXPECT_EQ(d.intervals()[0], Interval::closed(0.0, 1.0));

    const Domain gap({Interval::open(0.0, 0.5), Interval::open(0.5, 1.0)});
    EXPECT_EQ(gap.intervals().size(), 2u);
    EXPECT_FALSE(gap.contains(0.5));
    EXPECT_DOUBLE_EQ(gap.distance(2.0), 1.0);
}

TEST(PiecewiseMap, EvaluatesBranches) {
    const auto m = fixtures::quarter_maps();
    EXPECT_DOUBLE_EQ(eval_map(m.t, 0.75), 5.0 / 8.0);
    EXPECT_DOUBLE_EQ(eval_map(m.t, 2.0 / 3.0), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(eval_map(m.t, 0.5), 0.5);
    const auto id = PiecewiseMap::identity(Domain({Interval::closed(0.0, 1.0)}));
    EXPECT_EQ(eval_map(id, 0.3), 0.3);
}

TEST(PiecewiseMap, RaisesOutsideDomain) {
    const auto m = fixtures::quarter_maps();
    EXPECT_THROW(eval_map(m.t, 0.25), DomainError);
    EXPECT_THROW(eval_map(m.t, 1.5), DomainError);
}

TEST(PiecewiseMap, RejectsOverlapAndZeroSlope) {
    EXPECT_THROW(PiecewiseMap("m", {Branch(Interval::closed(0, 1), Constant{0}), Branch(Interval::closed(1, 2), Constant{1})}),
                 std::invalid_argument);
    EXPECT_THROW(Branch(Interval::closed(0, 1), Affine{0.0, 1.0}), std::invalid_argument);
}

TEST(PiecewiseMap, BranchesCoverTheDeclaredDomain) {
    const Domain quarter({Interval::left_open(0.25, 1.0)});
    const auto q = fixtures::quarter_maps();
    const auto x = fixtures::max_form_maps();
    for (const auto* m : {&q.t, &q.f, &q.g, &x.t, &x.f, &x.g}) EXPECT_EQ(m->domain(), quarter) << m->name();
    const Domain unit({Interval::left_open(0.0, 1.0)});
    const auto u = fixtures::unit_maps();
    for (const auto* m : {&u.t, &u.f, &u.g}) EXPECT_EQ(m->domain(), unit) << m->name();
}

TEST(PiecewiseMap, RangeFromBranchImages) {
    const auto r = fixtures::quarter_maps().f.range();
    ASSERT_EQ(r.intervals().size(), 2u);
    EXPECT_DOUBLE_EQ(r.intervals()[0].lo(), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(r.intervals()[0].hi(), 2.0 / 3.0);
    EXPECT_EQ(r.intervals()[1], Interval::point(1.0));
}

TEST(InvertMap, ClosedFormAffineBranch) {
    const auto f = fixtures::quarter_maps().f;
    EXPECT_NEAR(invert_map(f, 0.55, 0.9, 1e-12), 47.0 / 60.0, 1e-15);
    const auto id = PiecewiseMap::identity(Domain({Interval::closed(0.0, 1.0)}));
    EXPECT_DOUBLE_EQ(invert_map(id, 0.4, 0.9, 1e-12), 0.4);
    EXPECT_DOUBLE_EQ(invert_map(id, 0.4, 0.0, 1e-12), 0.4);
}

TEST(InvertMap, NoPreimageOutsideRange) {
    const auto f = fixtures::quarter_maps().f;
    EXPECT_THROW(invert_map(f, 0.1, 0.9, 1e-12), NoPreimage);
    EXPECT_THROW(invert_map(f, 0.8, 0.9, 1e-12), NoPreimage);
}

TEST(InvertMap, ConstantBranchGivesPointNearestAnchor) {
    const auto f = fixtures::quarter_maps().f;
    EXPECT_DOUBLE_EQ(invert_map(f, 1.0, 0.5, 1e-12), 0.5);
    const double x = invert_map(f, 1.0, 0.9, 1e-12);
    EXPECT_LT(x, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(f(x), 1.0);
}

TEST(InvertMap, TieGoesToSmallerPreimage) {
    const PiecewiseMap tent("tent", {Branch(Interval::right_open(0, 1), Affine{1, 0}), Branch(Interval::closed(1, 2), Affine{-1, 2})});
    EXPECT_DOUBLE_EQ(invert_map(tent, 0.5, 1.0, 1e-12), 0.5);
    EXPECT_DOUBLE_EQ(invert_map(tent, 0.5, 1.4, 1e-12), 1.5);
}

TEST(InvertMap, NonAffineBranches) {
    const auto r = fixtures::rational(10.0);
    EXPECT_NEAR(invert_map(r, 0.5, 3.0, 1e-12), 1.0, 1e-12);
    const PiecewiseMap sq("sq", {Branch(Interval::closed(0, 1), Power{1.0, 2.0})});
    EXPECT_NEAR(invert_map(sq, 0.25, 0.9, 1e-12), 0.5, 1e-12);
}

TEST(InvertMap, RoundTripOnAffineMaps) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        double s1 = coef(rng);
        double s2 = coef(rng);
        if (std::abs(s1) < 0.1) s1 = 0.5;
        if (std::abs(s2) < 0.1) s2 = -0.5;
        const PiecewiseMap m("m", {Branch(Interval::right_open(0, 0.5), Affine{s1, coef(rng)}),
                                   Branch(Interval::closed(0.5, 1), Affine{s2, coef(rng)})});
        ASSERT_TRUE(m.only_affine());
        for (double x : sample_grid(m.domain(), {51})) {
            // Nearest-to-anchor selection returns x itself even when other
            // branches share the value.
            EXPECT_NEAR(invert_map(m, eval_map(m, x), x, 1e-12), x, 1e-10);
        }
    }
}

TEST(Grid, OpenEndsAreInset) {
    GridSpec spec{3};
    spec.inset = 1e-6;
    const auto pts = sample_grid(Domain({Interval::left_open(0.25, 1.0)}), spec);
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_DOUBLE_EQ(pts[0], 0.25 + 1e-6);
    EXPECT_DOUBLE_EQ(pts[1], 0.625);
    EXPECT_DOUBLE_EQ(pts[2], 1.0);
}

TEST(Grid, ClosedAndDegenerate) {
    EXPECT_EQ(sample_grid(Domain({Interval::closed(0, 1)}), {2}), (std::vector<double>{0.0, 1.0}));
    EXPECT_EQ(sample_grid(Domain({Interval::point(0.3)}), {201}), (std::vector<double>{0.3}));
}

TEST(Grid, PointsAreMembersSortedAndUnique) {
    const Domain d({Interval::open(0, 1), Interval::left_open(2, 3)});
    const auto m = fixtures::quarter_maps();
    for (const auto& pts : {sample_grid(d, {101}), scan_grid(m.t.domain(), {101}, {&m.t, &m.f, &m.g})}) {
        for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i - 1], pts[i]);
    }
    for (double x : sample_grid(d, {101})) EXPECT_TRUE(d.contains(x));
    for (double x : scan_grid(m.t.domain(), {101}, {&m.t, &m.f, &m.g})) {
        EXPECT_TRUE(m.t.domain().contains(x));
        EXPECT_NO_THROW((void)eval_map(m.f, x));
    }
}

TEST(Grid, ScanGridIncludesBreakpoints) {
    const auto m = fixtures::quarter_maps();
    const auto pts = scan_grid(m.t.domain(), {10}, {&m.t});
    EXPECT_NE(std::find(pts.begin(), pts.end(), 2.0 / 3.0), pts.end());
}

TEST(Psi, Values) {
    EXPECT_NEAR(eval_psi(PsiFunction::power_ratio(), 1.0 / 12.0), 1.0 / 156.0, 1e-15);
    EXPECT_DOUBLE_EQ(eval_psi(PsiFunction::half_linear(), 1.0 / 12.0), 1.0 / 24.0);
    for (const auto& p : {PsiFunction::power_ratio(), PsiFunction::half_linear(), PsiFunction::custom("t^2")}) {
        EXPECT_EQ(eval_psi(p, 0.0), 0.0);
        EXPECT_THROW(eval_psi(p, -1.0), DomainError);
    }
}

TEST(Psi, ClassCheck) {
    for (double tmax : {1.0, 10.0, 100.0}) {
        EXPECT_TRUE(check_psi_class(PsiFunction::power_ratio(), tmax, 1001).passed);
        EXPECT_TRUE(check_psi_class(PsiFunction::half_linear(), tmax, 1001).passed);
    }
    const auto zero = check_psi_class(PsiFunction::custom("0*t", "zero"), 100.0, 101);
    EXPECT_FALSE(zero.passed);
    ASSERT_TRUE(zero.witness);
    EXPECT_DOUBLE_EQ(zero.witness->x, 1.0);
    EXPECT_FALSE(check_psi_class(PsiFunction::custom("1 - exp(-t)"), 100.0, 101).passed);  // bounded
    EXPECT_FALSE(check_psi_class(PsiFunction::custom("abs(t - 1)"), 10.0, 101).passed);    // not monotone
}

TEST(Expression, ParsesAndEvaluates) {
    EXPECT_DOUBLE_EQ(Expression("t^2/(1+t)")(1.0), 0.5);
    EXPECT_DOUBLE_EQ(Expression("-t + 2*3")(1.0), 5.0);
    EXPECT_DOUBLE_EQ(Expression("2^3^2")(0.0), 512.0);
    EXPECT_NEAR(Expression("sqrt(t) + log1p(t)")(4.0), 2.0 + std::log1p(4.0), 1e-15);
    EXPECT_THROW(Expression("t +"), ParseError);
    EXPECT_THROW(Expression("foo(t)"), ParseError);
    EXPECT_THROW(Expression("x"), ParseError);
}
