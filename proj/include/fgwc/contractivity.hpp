#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fgwc/grid.hpp"
#include "fgwc/piecewise_map.hpp"
#include "fgwc/psi.hpp"
#include "fgwc/report.hpp"

namespace fgwc {

/// Which contractive inequality to verify. All distances are |a - b|.
///
///   Contraction(k)        d(Tx,Ty) <= k d(x,y)
///   WeaklyContractive     d(Tx,Ty) <= d(x,y) - psi(d(x,y))
///   WeaklyContractiveWrt  d(Tx,Ty) <= d(fx,fy) - psi(d(fx,fy))
///   AzamShakeel           d(gx,Ty) <= d(fx,fy) - psi(d(fx,fy))
///   FgMin                 d(Tx,Ty) <= min{d(fx,gy) - psi(.), d(gx,fy) - psi(.)}
///   FgMax                 same with max
///   FamilyMin             max_j d(T1 x, Tj y) <= FgMin right-hand side
class InequalityKind {
public:
    enum class Tag { Contraction, WeaklyContractive, WeaklyContractiveWrt, AzamShakeel, FgMin, FgMax, FamilyMin };

    static InequalityKind contraction(double k) {
        if (!(k >= 0.0 && k < 1.0)) throw std::invalid_argument("contraction constant must lie in [0, 1)");
        return InequalityKind(Tag::Contraction, k);
    }
    static InequalityKind weakly_contractive() { return InequalityKind(Tag::WeaklyContractive); }
    static InequalityKind weakly_contractive_wrt() { return InequalityKind(Tag::WeaklyContractiveWrt); }
    static InequalityKind azam_shakeel() { return InequalityKind(Tag::AzamShakeel); }
    static InequalityKind fg_min() { return InequalityKind(Tag::FgMin); }
    static InequalityKind fg_max() { return InequalityKind(Tag::FgMax); }
    static InequalityKind family_min() { return InequalityKind(Tag::FamilyMin); }

    /// Parses the snake_case names produced by name(); contraction takes k.
    static InequalityKind from_name(const std::string& name, double k = 0.0) {
        if (name == "contraction") return contraction(k);
        if (name == "weakly_contractive") return weakly_contractive();
        if (name == "weakly_contractive_wrt") return weakly_contractive_wrt();
        if (name == "azam_shakeel") return azam_shakeel();
        if (name == "fg_min") return fg_min();
        if (name == "fg_max") return fg_max();
        if (name == "family_min") return family_min();
        throw std::invalid_argument("unknown inequality kind '" + name + "'");
    }

    Tag tag() const { return tag_; }
    double k() const { return k_; }

    std::string name() const {
        switch (tag_) {
            case Tag::Contraction: return "contraction";
            case Tag::WeaklyContractive: return "weakly_contractive";
            case Tag::WeaklyContractiveWrt: return "weakly_contractive_wrt";
            case Tag::AzamShakeel: return "azam_shakeel";
            case Tag::FgMin: return "fg_min";
            case Tag::FgMax: return "fg_max";
            case Tag::FamilyMin: return "family_min";
        }
        return "unknown";
    }

    bool needs_f() const { return tag_ != Tag::Contraction && tag_ != Tag::WeaklyContractive; }
    bool needs_g() const {
        return tag_ == Tag::AzamShakeel || tag_ == Tag::FgMin || tag_ == Tag::FgMax || tag_ == Tag::FamilyMin;
    }

private:
    explicit InequalityKind(Tag tag, double k = 0.0) : tag_(tag), k_(k) {}

    Tag tag_;
    double k_;
};

/// The maps an inequality refers to. For FamilyMin, `family` holds
/// T1, ..., Tk and `t` is T1.
struct MapBundle {
    PiecewiseMap t;
    std::optional<PiecewiseMap> f;
    std::optional<PiecewiseMap> g;
    std::vector<PiecewiseMap> family;

    const Domain& domain() const { return t.domain(); }

    std::vector<const PiecewiseMap*> all() const {
        std::vector<const PiecewiseMap*> out{&t};
        if (f) out.push_back(&*f);
        if (g) out.push_back(&*g);
        for (const auto& m : family) out.push_back(&m);
        return out;
    }

    void validate(const InequalityKind& kind) const {
        if (kind.needs_f() && !f) throw std::invalid_argument(kind.name() + " needs a map f");
        if (kind.needs_g() && !g) throw std::invalid_argument(kind.name() + " needs a map g");
        if (kind.tag() == InequalityKind::Tag::FamilyMin && family.empty()) {
            throw std::invalid_argument("family_min needs a non-empty family");
        }
        for (const PiecewiseMap* m : all()) {
            if (!(m->domain() == domain())) {
                throw std::invalid_argument("map '" + m->name() + "' does not share the domain of '" + t.name() +
                                            "'");
            }
        }
    }
};

/// lhs and rhs of the inequality at one ordered pair.
inline Witness evaluate_pair(const InequalityKind& kind, const MapBundle& maps, const PsiFunction& psi, double x,
                             double y) {
    auto slack = [&psi](double d) { return d - psi(d); };
    using Tag = InequalityKind::Tag;
    switch (kind.tag()) {
        case Tag::Contraction:
            return Witness::at(x, y, std::abs(maps.t(x) - maps.t(y)), kind.k() * std::abs(x - y));
        case Tag::WeaklyContractive:
            return Witness::at(x, y, std::abs(maps.t(x) - maps.t(y)), slack(std::abs(x - y)));
        case Tag::WeaklyContractiveWrt:
            return Witness::at(x, y, std::abs(maps.t(x) - maps.t(y)), slack(std::abs((*maps.f)(x) - (*maps.f)(y))));
        case Tag::AzamShakeel:
            return Witness::at(x, y, std::abs((*maps.g)(x) - maps.t(y)),
                               slack(std::abs((*maps.f)(x) - (*maps.f)(y))));
        case Tag::FgMin:
        case Tag::FgMax:
        case Tag::FamilyMin: {
            const double cross_fg = slack(std::abs((*maps.f)(x) - (*maps.g)(y)));
            const double cross_gf = slack(std::abs((*maps.g)(x) - (*maps.f)(y)));
            const double rhs = kind.tag() == Tag::FgMax ? std::max(cross_fg, cross_gf) : std::min(cross_fg, cross_gf);
            double lhs = 0.0;
            if (kind.tag() == Tag::FamilyMin) {
                const double t1x = maps.family.front()(x);
                for (const auto& tj : maps.family) lhs = std::max(lhs, std::abs(t1x - tj(y)));
            } else {
                lhs = std::abs(maps.t(x) - maps.t(y));
            }
            return Witness::at(x, y, lhs, rhs);
        }
    }
    return {};
}

/// Options shared by the inequality scanners.
struct CheckOptions {
    GridSpec grid;
    double tol = 1e-12;
    /// Scan only this part of the maps' domain.
    std::optional<Domain> window;
    /// Extra pairs evaluated and reported verbatim (not part of the scan).
    std::vector<std::pair<double, double>> probes;
};

/// Evaluates the inequality on every ordered pair of the scan grid. Fails
/// iff some pair has lhs > rhs + tol; the witness is the maximum-margin pair
/// (lexicographically first among pairs within tol of the maximum).
inline CheckReport check_inequality(const InequalityKind& kind, const MapBundle& maps, const PsiFunction& psi,
                                    const CheckOptions& opts = {}) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("check tolerance must be positive");
    maps.validate(kind);
    const Domain& region = opts.window ? *opts.window : maps.domain();
    const std::vector<double> pts = scan_grid(region, opts.grid, maps.all());
    for (double x : pts) {
        if (!maps.domain().contains(x)) {
            throw DomainError("scan point " + format_real(x) + " lies outside the maps' domain");
        }
    }

    CheckReport r;
    r.check = kind.name();
    r.tol = opts.tol;
    r.grid = opts.grid;
    detail::MarginTracker tracker(opts.tol);
    for (double x : pts) {
        for (double y : pts) tracker.add(evaluate_pair(kind, maps, psi, x, y));
    }
    tracker.finish(r);
    for (const auto& [x, y] : opts.probes) r.probes.push_back(evaluate_pair(kind, maps, psi, x, y));
    if (opts.window) r.notes.push_back("scan restricted to " + opts.window->to_string());
    return r;
}

/// Checks d(T1 x, Tj y) <= min{...} for every member Tj of the family.
inline CheckReport check_family(const std::vector<PiecewiseMap>& ts, const PiecewiseMap& f, const PiecewiseMap& g,
                                const PsiFunction& psi, const CheckOptions& opts = {}) {
    if (ts.empty()) throw std::invalid_argument("check_family: empty family");
    MapBundle maps{ts.front(), f, g, ts};
    return check_inequality(InequalityKind::family_min(), maps, psi, opts);
}

namespace detail {

/// Candidate zeros of a residual over a sorted grid: grid points with
/// residual <= tol, plus bisection roots (50 halvings) inside cells where any
/// of the signed functions changes sign continuously. Bisection roots are
/// kept only if their residual is also <= tol.
inline std::vector<double> scan_zeros(const std::vector<double>& pts, const Domain& domain,
                                      const std::vector<std::function<double(double)>>& signed_fns,
                                      const std::function<double(double)>& residual, double tol,
                                      bool* every_point = nullptr) {
    std::vector<double> hits;
    bool all = !pts.empty();
    for (double x : pts) {
        if (residual(x) <= tol) {
            hits.push_back(x);
        } else {
            all = false;
        }
    }
    if (every_point != nullptr) *every_point = all;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        if (domain.find(a) != domain.find(b)) continue;
        for (const auto& fn : signed_fns) {
            double lo = a;
            double hi = b;
            double s_lo = fn(lo);
            const double s_hi = fn(hi);
            if (!(s_lo * s_hi < 0.0)) continue;
            for (int it = 0; it < 50; ++it) {
                const double mid = lo + (hi - lo) / 2.0;
                const double s_mid = fn(mid);
                if (s_mid == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((s_mid < 0.0) == (s_lo < 0.0)) {
                    lo = mid;
                    s_lo = s_mid;
                } else {
                    hi = mid;
                }
            }
            // A jump across zero leaves one side of the final bracket far
            // from zero; only continuous crossings count.
            if (std::max(std::abs(fn(lo)), std::abs(fn(hi))) > tol) continue;
            const double lo_res = residual(lo);
            const double hi_res = residual(hi);
            const double root = lo_res <= hi_res ? lo : hi;
            if (std::min(lo_res, hi_res) <= tol) hits.push_back(root);
        }
    }
    sort_unique(hits);
    return hits;
}

/// Merges hits closer than `radius`; each cluster is represented by its
/// smallest-residual member.
inline std::vector<double> cluster(const std::vector<double>& hits, double radius,
                                   const std::function<double(double)>& residual) {
    std::vector<double> out;
    std::size_t i = 0;
    while (i < hits.size()) {
        std::size_t j = i;
        double best = hits[i];
        double best_res = residual(best);
        while (j + 1 < hits.size() && hits[j + 1] - hits[j] <= radius) {
            ++j;
            const double r = residual(hits[j]);
            if (r < best_res) {
                best = hits[j];
                best_res = r;
            }
        }
        out.push_back(best);
        i = j + 1;
    }
    return out;
}

}  // namespace detail

/// Result of a common-fixed-point scan.
struct FixedPointScan {
    std::vector<double> points;
    /// Every grid point was a common fixed point; `points` then lists the grid.
    bool whole_domain = false;
    std::size_t grid_size = 0;
};

/// Points x with max_m |m(x) - x| <= residual_tol, found on the scan grid and
/// refined by bisection inside cells where some m(x) - x changes sign.
inline FixedPointScan find_common_fixed_points(const std::vector<PiecewiseMap>& maps, const GridSpec& grid,
                                               double residual_tol = 1e-9) {
    if (maps.empty()) throw std::invalid_argument("find_common_fixed_points: no maps");
    if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
    const Domain& domain = maps.front().domain();
    std::vector<const PiecewiseMap*> ptrs;
    for (const auto& m : maps) {
        if (!(m.domain() == domain)) throw std::invalid_argument("maps do not share one domain");
        ptrs.push_back(&m);
    }
    const auto pts = scan_grid(domain, grid, ptrs);

    auto residual = [&maps](double x) {
        double r = 0.0;
        for (const auto& m : maps) r = std::max(r, std::abs(m(x) - x));
        return r;
    };
    std::vector<std::function<double(double)>> signed_fns;
    for (const auto& m : maps) signed_fns.emplace_back([&m](double x) { return m(x) - x; });

    FixedPointScan scan;
    scan.grid_size = pts.size();
    const auto hits = detail::scan_zeros(pts, domain, signed_fns, residual, residual_tol, &scan.whole_domain);
    scan.points = scan.whole_domain ? pts : detail::cluster(hits, grid_spacing(domain, grid), residual);
    return scan;
}

/// Outcome of a weak-compatibility check.
struct WeakCompatibilityReport {
    CheckReport check;
    /// Clustered coincidence points |a(x) - b(x)| <= tol.
    std::vector<double> coincidence_points;
    /// Coincidence points where a(b(x)) or b(a(x)) leaves the domain.
    std::vector<double> out_of_domain;
};

/// Two maps are weakly compatible when they commute at every coincidence
/// point: a(x) = b(x) implies a(b(x)) = b(a(x)).
inline WeakCompatibilityReport check_weak_compatibility(const PiecewiseMap& a, const PiecewiseMap& b,
                                                        const GridSpec& grid, double tol = 1e-12) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (!(a.domain() == b.domain())) throw std::invalid_argument("maps do not share one domain");
    const Domain& domain = a.domain();
    const auto pts = scan_grid(domain, grid, {&a, &b});
    auto gap = [&](double x) { return std::abs(a(x) - b(x)); };
    const std::vector<std::function<double(double)>> signed_fns{[&](double x) { return a(x) - b(x); }};
    const auto hits = detail::scan_zeros(pts, domain, signed_fns, gap, tol);

    WeakCompatibilityReport out;
    CheckReport& r = out.check;
    r.check = "weak_compatibility";
    r.tol = tol;
    r.grid = grid;
    out.coincidence_points = detail::cluster(hits, grid_spacing(domain, grid), gap);
    detail::MarginTracker tracker(tol);
    for (double x : out.coincidence_points) {
        const double ax = a(x);
        const double bx = b(x);
        if (!domain.contains(ax) || !domain.contains(bx)) {
            out.out_of_domain.push_back(x);
            continue;
        }
        const double abx = a(bx);
        const double bax = b(ax);
        if (!domain.contains(abx) || !domain.contains(bax)) {
            out.out_of_domain.push_back(x);
            continue;
        }
        tracker.add(Witness::at(x, x, std::abs(abx - bax), 0.0));
    }
    tracker.finish(r);
    if (!r.passed) r.violated = a.name() + "(" + b.name() + "(x)) = " + b.name() + "(" + a.name() + "(x))";
    if (!out.out_of_domain.empty()) {
        r.notes.push_back(std::to_string(out.out_of_domain.size()) +
                          " coincidence point(s) skipped: composite leaves the domain");
    }
    return out;
}

}  // namespace fgwc
