#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgwc/contractivity.hpp"
#include "fgwc/errors.hpp"
#include "fgwc/grid.hpp"
#include "fgwc/interval.hpp"
#include "fgwc/piecewise_map.hpp"
#include "fgwc/psi.hpp"
#include "fgwc/report.hpp"

namespace fgwc {

/// Finite union of closed bounded intervals (compact in one dimension).
/// May be empty; best_approx rejects the empty set.
class CompactSet {
public:
    CompactSet() = default;
    explicit CompactSet(Domain d) : domain_(std::move(d)) {
        if (!domain_.all_closed()) throw std::invalid_argument("compact set needs closed intervals");
    }
    CompactSet(std::initializer_list<Interval> ivs) : CompactSet(Domain(std::vector<Interval>(ivs))) {}

    const Domain& domain() const { return domain_; }
    bool contains(double x) const { return domain_.contains(x); }
    bool empty() const { return domain_.empty(); }

private:
    Domain domain_;
};

/// P_M(u) and dist(u, M).
struct BestApproxResult {
    double u = 0.0;
    double dist = 0.0;
    std::vector<double> points;
};

/// Exact best approximations from interval endpoints: {u} when u is in M,
/// otherwise every endpoint at the minimal distance (at most two).
inline BestApproxResult best_approx(const CompactSet& m, double u) {
    if (m.empty()) throw EmptySet("best_approx: empty set");
    BestApproxResult r;
    r.u = u;
    if (m.contains(u)) {
        r.points = {u};
        return r;
    }
    r.dist = std::numeric_limits<double>::infinity();
    for (const auto& iv : m.domain().intervals()) {
        for (double p : {iv.lo(), iv.hi()}) {
            const double d = std::abs(p - u);
            if (d < r.dist) {
                r.dist = d;
                r.points = {p};
            } else if (d == r.dist && std::find(r.points.begin(), r.points.end(), p) == r.points.end()) {
                r.points.push_back(p);
            }
        }
    }
    std::sort(r.points.begin(), r.points.end());
    return r;
}

/// m(s) subset of s, sampled over the grid of s. The witness is the sample
/// whose image lies farthest from s (x = y = sample, lhs = that distance).
inline CheckReport check_invariance(const PiecewiseMap& m, const CompactSet& s, const GridSpec& grid,
                                    double tol = 1e-12) {
    CheckReport r;
    r.check = "invariance(" + m.name() + ")";
    r.tol = tol;
    r.grid = grid;
    detail::MarginTracker tracker(tol);
    for (double x : scan_grid(s.domain(), grid, {&m})) {
        tracker.add(Witness::at(x, x, s.domain().distance(m(x)), 0.0));
    }
    tracker.finish(r);
    if (!r.passed) r.violated = m.name() + "(x) in " + s.domain().to_string();
    return r;
}

/// m(P) subset of P for a finite point set, checked point by point.
inline CheckReport check_invariance(const PiecewiseMap& m, const std::vector<double>& points, double tol = 1e-12) {
    CheckReport r;
    r.check = "invariance(" + m.name() + ")";
    r.tol = tol;
    detail::MarginTracker tracker(tol);
    for (double p : points) {
        const double image = m(p);
        double d = std::numeric_limits<double>::infinity();
        for (double q : points) d = std::min(d, std::abs(image - q));
        tracker.add(Witness::at(p, p, d, 0.0));
    }
    tracker.finish(r);
    if (!r.passed) r.violated = m.name() + "(p) in the point set";
    return r;
}

/// Result of the strict-gap hypothesis check: every x with
/// d(x, Ta) >= d(x, fa) or d(x, Ta) >= d(x, ga) violates it.
struct GapReport {
    CheckReport check;
    /// Smallest and largest violating x on the grid.
    std::optional<double> first_violation_x;
    std::optional<double> last_violation_x;
};

/// For each a in P_M(u) and every ambient grid point x, requires
/// d(x, Ta) < d(x, fa) and d(x, Ta) < d(x, ga) by more than 1e-12.
inline GapReport check_strict_gap(const PiecewiseMap& t, const PiecewiseMap& f, const PiecewiseMap& g,
                                       const BestApproxResult& pm, const GridSpec& ambient_grid) {
    if (pm.points.empty()) throw std::invalid_argument("check_strict_gap: empty best-approximation set");
    constexpr double strict = 1e-12;
    GapReport out;
    CheckReport& r = out.check;
    r.check = "strict_gap";
    r.tol = strict;
    r.grid = ambient_grid;
    // margin = lhs - rhs + strict > 0 means "not strictly less by the margin".
    detail::MarginTracker tracker(0.0);
    const auto pts = scan_grid(t.domain(), ambient_grid, {&t, &f, &g});
    for (double a : pm.points) {
        const double ta = t(a);
        const double fa = f(a);
        const double ga = g(a);
        for (double x : pts) {
            const double lhs = std::abs(x - ta);
            const double rhs = std::min(std::abs(x - fa), std::abs(x - ga));
            Witness w = Witness::at(x, a, lhs, rhs);
            w.margin = lhs - rhs + strict;
            tracker.add(w);
            if (w.margin > 0.0) {
                if (!out.first_violation_x || x < *out.first_violation_x) out.first_violation_x = x;
                if (!out.last_violation_x || x > *out.last_violation_x) out.last_violation_x = x;
            }
        }
    }
    tracker.finish(r);
    if (!r.passed) r.violated = "d(x,Ta) < d(x,fa) and d(x,Ta) < d(x,ga) strictly";
    return out;
}

struct HypothesisResult {
    std::string name;
    bool passed = false;
    std::optional<Witness> witness;
    std::string detail;
};

struct InvariantApproxReport {
    BestApproxResult best;
    std::vector<HypothesisResult> hypotheses;
    bool conclusion_holds = false;
    std::optional<double> z;
    /// max(|Tz - z|, |fz - z|, |gz - z|) at z, or the smallest over P when
    /// no point qualifies.
    double residual = 0.0;

    bool all_hypotheses_hold() const {
        return std::all_of(hypotheses.begin(), hypotheses.end(), [](const auto& h) { return h.passed; });
    }
    std::vector<std::string> failed_hypotheses() const {
        std::vector<std::string> out;
        for (const auto& h : hypotheses) {
            if (!h.passed) out.push_back(h.name);
        }
        return out;
    }
};

/// Invariant-approximation battery: computes P_M(x0), evaluates each
/// hypothesis independently and then looks for a common fixed point of
/// T, f, g inside P_M(x0). The conclusion is reported whether or not the
/// hypotheses hold.
inline InvariantApproxReport verify_invariant_approximation(const PiecewiseMap& t, const PiecewiseMap& f,
                                                            const PiecewiseMap& g, const CompactSet& m, double x0,
                                                            const PsiFunction& psi, const GridSpec& grid) {
    constexpr double fixed_tol = 1e-9;
    const Domain& ambient = t.domain();
    if (!ambient.contains(x0)) throw DomainError("x0 = " + format_real(x0) + " is outside " + ambient.to_string());
    for (const auto& iv : m.domain().intervals()) {
        if (!ambient.contains(iv.lo()) || !ambient.contains(iv.hi()) ||
            ambient.find(iv.lo()) != ambient.find(iv.hi())) {
            throw std::invalid_argument("compact set " + m.domain().to_string() + " is not inside " +
                                        ambient.to_string());
        }
    }

    InvariantApproxReport rep;
    rep.best = best_approx(m, x0);
    auto common_residual = [&](double x) {
        return std::max({std::abs(t(x) - x), std::abs(f(x) - x), std::abs(g(x) - x)});
    };
    auto from_check = [](std::string name, const CheckReport& c) {
        return HypothesisResult{std::move(name), c.passed, c.witness, c.violated};
    };

    {
        const double res = common_residual(x0);
        rep.hypotheses.push_back({"x0_common_fixed_point", res <= fixed_tol, std::nullopt,
                                  "max residual " + format_real(res)});
    }
    MapBundle bundle{t, f, g, {}};
    rep.hypotheses.push_back(
        from_check("fg_weakly_contractive", check_inequality(InequalityKind::fg_min(), bundle, psi, {grid})));
    rep.hypotheses.push_back(from_check("weakly_compatible_T_f", check_weak_compatibility(t, f, grid).check));
    rep.hypotheses.push_back(from_check("weakly_compatible_T_g", check_weak_compatibility(t, g, grid).check));
    rep.hypotheses.push_back(from_check("T_invariant_M", check_invariance(t, m, grid)));
    rep.hypotheses.push_back(from_check("f_invariant_M", check_invariance(f, m, grid)));
    rep.hypotheses.push_back(from_check("g_invariant_M", check_invariance(g, m, grid)));
    {
        const auto by_f = check_invariance(f, rep.best.points);
        const auto by_g = check_invariance(g, rep.best.points);
        HypothesisResult h{"f_or_g_invariant_P", by_f.passed || by_g.passed, std::nullopt, {}};
        if (!h.passed) {
            h.witness = by_f.witness;
            h.detail = "neither f(P) nor g(P) is inside P";
        }
        rep.hypotheses.push_back(h);
    }

    double best_res = std::numeric_limits<double>::infinity();
    for (double z : rep.best.points) {
        const double res = common_residual(z);
        if (res < best_res) {
            best_res = res;
            if (res <= fixed_tol) rep.z = z;
        }
    }
    rep.residual = best_res;
    rep.conclusion_holds = rep.z.has_value();
    return rep;
}

}  // namespace fgwc
