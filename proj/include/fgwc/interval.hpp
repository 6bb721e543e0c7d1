#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgwc/real.hpp"

namespace fgwc {

/// One real interval whose endpoints are independently open or closed.
/// A degenerate interval [c, c] is a single point and must be closed.
class Interval {
public:
    Interval(double lo, double hi, bool lo_closed, bool hi_closed)
        : lo_(lo), hi_(hi), lo_closed_(lo_closed), hi_closed_(hi_closed) {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw std::invalid_argument("interval endpoints must be finite");
        }
        if (lo > hi) {
            throw std::invalid_argument("interval with lo > hi");
        }
        if (lo == hi && !(lo_closed && hi_closed)) {
            throw std::invalid_argument("degenerate interval must be closed");
        }
    }

    static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
    static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
    static Interval left_open(double lo, double hi) { return {lo, hi, false, true}; }
    static Interval right_open(double lo, double hi) { return {lo, hi, true, false}; }
    static Interval point(double c) { return {c, c, true, true}; }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool lo_closed() const { return lo_closed_; }
    bool hi_closed() const { return hi_closed_; }
    double length() const { return hi_ - lo_; }
    bool degenerate() const { return lo_ == hi_; }

    bool contains(double x) const {
        const bool above = lo_closed_ ? x >= lo_ : x > lo_;
        const bool below = hi_closed_ ? x <= hi_ : x < hi_;
        return above && below;
    }

    /// Nearest member of the interval to x. Open endpoints resolve to the
    /// adjacent representable double inside the interval.
    double clamp(double x) const {
        if (contains(x)) return x;
        if (x <= lo_) {
            return lo_closed_ ? lo_ : std::nextafter(lo_, hi_);
        }
        return hi_closed_ ? hi_ : std::nextafter(hi_, lo_);
    }

    /// Distance from x to the closure of the interval.
    double distance(double x) const {
        if (x < lo_) return lo_ - x;
        if (x > hi_) return x - hi_;
        return 0.0;
    }

    std::string to_string() const {
        return std::string(lo_closed_ ? "[" : "(") + format_real(lo_) + ", " +
               format_real(hi_) + (hi_closed_ ? "]" : ")");
    }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_;
    double hi_;
    bool lo_closed_;
    bool hi_closed_;
};

/// Finite union of intervals kept in normalized form: sorted by lo, with no
/// two members overlapping or touching at a point either of them contains.
class Domain {
public:
    Domain() = default;

    explicit Domain(std::vector<Interval> intervals) : intervals_(normalize(std::move(intervals))) {}

    Domain(std::initializer_list<Interval> intervals)
        : Domain(std::vector<Interval>(intervals)) {}

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }

    bool contains(double x) const { return find(x) != nullptr; }

    /// The member interval containing x, or nullptr.
    const Interval* find(double x) const {
        auto it = std::partition_point(intervals_.begin(), intervals_.end(),
                                       [x](const Interval& iv) { return iv.hi() < x; });
        for (; it != intervals_.end() && it->lo() <= x; ++it) {
            if (it->contains(x)) return &*it;
        }
        return nullptr;
    }

    /// Distance from x to the closure of the union.
    double distance(double x) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& iv : intervals_) best = std::min(best, iv.distance(x));
        return best;
    }

    bool all_closed() const {
        return std::all_of(intervals_.begin(), intervals_.end(),
                           [](const Interval& iv) { return iv.lo_closed() && iv.hi_closed(); });
    }

    std::string to_string() const {
        if (intervals_.empty()) return "{}";
        std::string out;
        for (const auto& iv : intervals_) {
            if (!out.empty()) out += " U ";
            out += iv.to_string();
        }
        return out;
    }

    friend bool operator==(const Domain&, const Domain&) = default;

private:
    static std::vector<Interval> normalize(std::vector<Interval> ivs) {
        std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
            if (a.lo() != b.lo()) return a.lo() < b.lo();
            return a.lo_closed() && !b.lo_closed();
        });
        std::vector<Interval> out;
        for (const auto& iv : ivs) {
            if (out.empty()) {
                out.push_back(iv);
                continue;
            }
            const Interval& last = out.back();
            const bool overlaps = iv.lo() < last.hi();
            const bool touches = iv.lo() == last.hi() && (last.hi_closed() || iv.lo_closed());
            if (!overlaps && !touches) {
                out.push_back(iv);
                continue;
            }
            const bool lo_closed = last.lo_closed() || (iv.lo() == last.lo() && iv.lo_closed());
            double hi = last.hi();
            bool hi_closed = last.hi_closed();
            if (iv.hi() > hi) {
                hi = iv.hi();
                hi_closed = iv.hi_closed();
            } else if (iv.hi() == hi) {
                hi_closed = hi_closed || iv.hi_closed();
            }
            out.back() = Interval(last.lo(), hi, lo_closed, hi_closed);
        }
        return out;
    }

    std::vector<Interval> intervals_;
};

}  // namespace fgwc
