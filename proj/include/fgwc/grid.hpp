#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fgwc/interval.hpp"
#include "fgwc/piecewise_map.hpp"

namespace fgwc {

/// Discretization of a domain. Open endpoints are replaced by points moved
/// inward by `inset`; without an explicit inset the distance is
/// `relative_inset` times the interval length.
struct GridSpec {
    std::size_t points_per_interval = 201;
    std::optional<double> inset;
    double relative_inset = 1e-6;

    double inset_for(const Interval& iv) const { return inset.value_or(relative_inset * iv.length()); }

    void validate() const {
        if (points_per_interval < 2) throw std::invalid_argument("grid needs at least 2 points per interval");
        if (inset && !(*inset > 0.0)) throw std::invalid_argument("grid inset must be positive");
        if (!(relative_inset > 0.0)) throw std::invalid_argument("grid relative inset must be positive");
    }
};

namespace detail {

inline void sort_unique(std::vector<double>& pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

}  // namespace detail

/// Equally spaced points per interval, open ends inset. Sorted, no duplicates,
/// every point a member of `d`.
inline std::vector<double> sample_grid(const Domain& d, const GridSpec& spec) {
    spec.validate();
    std::vector<double> pts;
    for (const auto& iv : d.intervals()) {
        if (iv.degenerate()) {
            pts.push_back(iv.lo());
            continue;
        }
        const std::size_t n = spec.points_per_interval;
        const double inset = spec.inset_for(iv);
        for (std::size_t i = 0; i < n; ++i) {
            double x = iv.lo() + iv.length() * static_cast<double>(i) / static_cast<double>(n - 1);
            if (i == 0) x = iv.lo();
            if (i == n - 1) x = iv.hi();
            if (i == 0 && !iv.lo_closed()) x = iv.lo() + inset;
            if (i == n - 1 && !iv.hi_closed()) x = iv.hi() - inset;
            if (iv.contains(x)) pts.push_back(x);
        }
    }
    detail::sort_unique(pts);
    return pts;
}

/// Grid used by inequality scans: sample_grid plus every branch endpoint of
/// the given maps (inset inward when the branch excludes it), restricted to
/// `d`. Piecewise-affine margins attain their extremes on this set.
inline std::vector<double> scan_grid(const Domain& d, const GridSpec& spec,
                                     const std::vector<const PiecewiseMap*>& maps) {
    std::vector<double> pts = sample_grid(d, spec);
    for (const PiecewiseMap* m : maps) {
        for (const auto& b : m->branches()) {
            const Interval& sub = b.subdomain();
            const Interval* host = d.find(sub.degenerate() ? sub.lo() : (sub.lo() + sub.hi()) / 2.0);
            const double inset = host != nullptr ? spec.inset_for(*host) : spec.inset_for(sub);
            const double lo = sub.lo_closed() ? sub.lo() : sub.lo() + inset;
            const double hi = sub.hi_closed() ? sub.hi() : sub.hi() - inset;
            for (double x : {lo, hi}) {
                if (sub.contains(x) && d.contains(x)) pts.push_back(x);
            }
        }
    }
    detail::sort_unique(pts);
    return pts;
}

/// Nominal spacing of the uniform part of the grid (smallest over intervals).
inline double grid_spacing(const Domain& d, const GridSpec& spec) {
    double h = 0.0;
    for (const auto& iv : d.intervals()) {
        if (iv.degenerate()) continue;
        const double hi = iv.length() / static_cast<double>(spec.points_per_interval - 1);
        h = h == 0.0 ? hi : std::min(h, hi);
    }
    return h;
}

}  // namespace fgwc
