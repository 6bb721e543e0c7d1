#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fgwc/grid.hpp"

namespace fgwc {

/// A concrete pair at which an inequality lhs <= rhs was evaluated.
/// margin = lhs - rhs; a violation has margin > tol.
struct Witness {
    double x = 0.0;
    double y = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;

    static Witness at(double x, double y, double lhs, double rhs) { return {x, y, lhs, rhs, lhs - rhs}; }
};

/// Outcome of a grid verification. `passed` holds iff `witness` is empty.
/// A pass is a certificate on the listed grid only.
struct CheckReport {
    std::string check;
    bool passed = true;
    std::optional<Witness> witness;
    std::string violated;  // which condition the witness breaks
    std::size_t pairs_checked = 0;
    std::size_t violations = 0;
    double max_margin = 0.0;
    double tol = 0.0;
    std::optional<GridSpec> grid;
    std::vector<Witness> probes;
    std::vector<std::string> notes;
};

namespace detail {

/// Tracks the maximum margin over a scan and the lexicographically first
/// point whose margin is within tol of it. Points must be fed in scan order.
class MarginTracker {
public:
    explicit MarginTracker(double tol) : tol_(tol) {}

    void add(const Witness& w) {
        ++count_;
        if (w.margin > tol_) ++violations_;
        if (!best_ || w.margin > best_->margin + tol_) {
            best_ = w;
            max_ = w.margin;
        } else if (w.margin > max_) {
            max_ = w.margin;
        }
    }

    std::size_t count() const { return count_; }
    std::size_t violations() const { return violations_; }
    double max_margin() const { return count_ == 0 ? 0.0 : max_; }
    const std::optional<Witness>& best() const { return best_; }

    /// Fills passed/witness/max_margin/pairs_checked.
    void finish(CheckReport& r) const {
        r.pairs_checked = count_;
        r.violations = violations_;
        r.max_margin = max_margin();
        r.passed = !(best_ && best_->margin > tol_);
        if (!r.passed) r.witness = best_;
    }

private:
    double tol_;
    std::size_t count_ = 0;
    std::size_t violations_ = 0;
    double max_ = 0.0;
    std::optional<Witness> best_;
};

}  // namespace detail

}  // namespace fgwc
