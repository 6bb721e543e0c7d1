#pragma once

#include <string>

#include "fgwc/fgwc.hpp"

namespace fixtures {

using fgwc::Affine;
using fgwc::Branch;
using fgwc::Constant;
using fgwc::Interval;
using fgwc::PiecewiseMap;

constexpr double kQuarter = 1.0 / 4.0;
constexpr double kThird = 1.0 / 3.0;
constexpr double kTwoThirds = 2.0 / 3.0;
constexpr double kFourThirds = 4.0 / 3.0;

struct Triple {
    PiecewiseMap t;
    PiecewiseMap f;
    PiecewiseMap g;
};

inline fgwc::MapBundle bundle(const Triple& m) { return {m.t, m.f, m.g, {}}; }

/// x / (1 + x) on [0, hi].
inline PiecewiseMap rational(double hi = 100.0) {
    return {"T", {Branch(Interval::closed(0.0, hi), fgwc::LinearFractional{1.0, 0.0, 1.0, 1.0})}};
}

/// Three maps on (1/4, 1] with unique common fixed point 2/3; the
/// Azam-Shakeel inequality fails for them while the (f,g) one holds.
inline Triple quarter_maps() {
    const auto left = Interval::open(kQuarter, kTwoThirds);
    const auto right = Interval::closed(kTwoThirds, 1.0);
    return {
        PiecewiseMap("T", {Branch(left, Constant{0.5}), Branch(right, Affine{-0.5, 1.0})}),
        PiecewiseMap("f", {Branch(left, Constant{1.0}), Branch(right, Affine{-1.0, kFourThirds})}),
        PiecewiseMap("g", {Branch(left, Constant{kThird}), Branch(right, Affine{-1.0, kFourThirds})}),
    };
}

/// Three maps on (0, 1] with psi(t) = t/2 in mind.
inline Triple unit_maps() {
    const auto left = Interval::open(0.0, kTwoThirds);
    const auto mid = Interval::right_open(kTwoThirds, 1.0);
    const auto one = Interval::point(1.0);
    return {
        PiecewiseMap("T", {Branch(left, Constant{0.5}), Branch(mid, Affine{-0.5, 1.0}), Branch(one, Constant{kTwoThirds})}),
        PiecewiseMap("f", {Branch(left, Constant{kThird}), Branch(mid, Affine{-1.0, kFourThirds}), Branch(one, Constant{1.0})}),
        PiecewiseMap("g", {Branch(left, Constant{0.5}), Branch(Interval::closed(kTwoThirds, 1.0), Affine{-0.5, 1.0})}),
    };
}

/// Three maps on (1/4, 1] satisfying the max-form inequality with no common
/// fixed point. The first branches of f and g start at 1/4.
inline Triple max_form_maps() {
    const auto left = Interval::left_open(kQuarter, kTwoThirds);
    const auto right = Interval::left_open(kTwoThirds, 1.0);
    return {
        PiecewiseMap("T", {Branch(left, Constant{0.5}), Branch(right, Affine{-0.5, 1.0})}),
        PiecewiseMap("f", {Branch(left, Constant{1.0}), Branch(right, Affine{-1.0, kFourThirds})}),
        PiecewiseMap("g", {Branch(Interval::open(kQuarter, kTwoThirds), Constant{kThird}),
                           Branch(Interval::closed(kTwoThirds, 1.0), Affine{-1.0, kFourThirds})}),
    };
}

/// T(x) = x/2 with f = g = identity on [0, 1].
inline Triple halving_maps() {
    const auto unit = Interval::closed(0.0, 1.0);
    return {PiecewiseMap::affine(unit, 0.5, 0.0, "T"), PiecewiseMap::affine(unit, 1.0, 0.0, "f"),
            PiecewiseMap::affine(unit, 1.0, 0.0, "g")};
}

inline std::string scenario_path(const std::string& name) { return std::string(FGWC_SCENARIO_DIR) + "/" + name + ".json"; }

}  // namespace fixtures
