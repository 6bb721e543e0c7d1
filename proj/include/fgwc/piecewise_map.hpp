#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "fgwc/errors.hpp"
#include "fgwc/interval.hpp"

namespace fgwc {

/// y = slope * x + intercept, slope != 0.
struct Affine {
    double slope;
    double intercept;
};

/// y = value.
struct Constant {
    double value;
};

/// y = (a x + b) / (c x + d), with ad - bc != 0 and no pole on the subdomain.
struct LinearFractional {
    double a;
    double b;
    double c;
    double d;
};

/// y = coef * x^exponent on a subdomain of [0, inf), exponent > 0.
struct Power {
    double coef;
    double exponent;
};

using BranchKind = std::variant<Affine, Constant, LinearFractional, Power>;

/// One piece of a piecewise definition. Every kind is either constant or
/// strictly monotone on its subdomain, so its image follows from the
/// endpoints and its inverse is closed-form.
class Branch {
public:
    Branch(Interval subdomain, BranchKind kind) : subdomain_(subdomain), kind_(kind) { validate(); }

    const Interval& subdomain() const { return subdomain_; }
    const BranchKind& kind() const { return kind_; }
    bool is_constant() const { return std::holds_alternative<Constant>(kind_); }
    bool is_affine() const { return std::holds_alternative<Affine>(kind_); }

    /// Formula value; does not check membership.
    double apply(double x) const {
        return std::visit(
            [x](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Affine>) {
                    return k.slope * x + k.intercept;
                } else if constexpr (std::is_same_v<K, Constant>) {
                    return k.value;
                } else if constexpr (std::is_same_v<K, LinearFractional>) {
                    return (k.a * x + k.b) / (k.c * x + k.d);
                } else {
                    return k.coef * std::pow(x, k.exponent);
                }
            },
            kind_);
    }

    /// Formula inverse for non-constant kinds; nullopt when y has no real
    /// preimage under the formula (membership is not checked).
    std::optional<double> formula_inverse(double y) const {
        return std::visit(
            [y](const auto& k) -> std::optional<double> {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Affine>) {
                    return (y - k.intercept) / k.slope;
                } else if constexpr (std::is_same_v<K, Constant>) {
                    return std::nullopt;
                } else if constexpr (std::is_same_v<K, LinearFractional>) {
                    const double den = k.a - k.c * y;
                    if (den == 0.0) return std::nullopt;
                    return (k.d * y - k.b) / den;
                } else {
                    const double ratio = y / k.coef;
                    if (ratio < 0.0) return std::nullopt;
                    return std::pow(ratio, 1.0 / k.exponent);
                }
            },
            kind_);
    }

    /// Image of the subdomain as an interval. Open subdomain endpoints map to
    /// open image endpoints (the kinds are continuous and strictly monotone).
    Interval image() const {
        if (const auto* c = std::get_if<Constant>(&kind_)) return Interval::point(c->value);
        const double a = apply(subdomain_.lo());
        const double b = apply(subdomain_.hi());
        if (subdomain_.degenerate()) return Interval::point(a);
        if (a <= b) return {a, b, subdomain_.lo_closed(), subdomain_.hi_closed()};
        return {b, a, subdomain_.hi_closed(), subdomain_.lo_closed()};
    }

private:
    void validate() const {
        std::visit(
            [this](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Affine>) {
                    if (k.slope == 0.0) throw std::invalid_argument("affine branch with zero slope");
                } else if constexpr (std::is_same_v<K, LinearFractional>) {
                    if (k.a * k.d - k.b * k.c == 0.0) {
                        throw std::invalid_argument("degenerate linear-fractional branch (ad - bc = 0)");
                    }
                    const double p = k.c * subdomain_.lo() + k.d;
                    const double q = k.c * subdomain_.hi() + k.d;
                    if (p == 0.0 || q == 0.0 || (p < 0.0) != (q < 0.0)) {
                        throw std::invalid_argument("linear-fractional branch has a pole on its subdomain");
                    }
                } else if constexpr (std::is_same_v<K, Power>) {
                    if (k.coef == 0.0 || !(k.exponent > 0.0)) {
                        throw std::invalid_argument("power branch needs coef != 0 and exponent > 0");
                    }
                    if (subdomain_.lo() < 0.0) {
                        throw std::invalid_argument("power branch subdomain must lie in [0, inf)");
                    }
                }
            },
            kind_);
    }

    Interval subdomain_;
    BranchKind kind_;
};

/// A named selfmap of a one-dimensional domain given by disjoint branches.
class PiecewiseMap {
public:
    PiecewiseMap(std::string name, std::vector<Branch> branches)
        : name_(std::move(name)), branches_(std::move(branches)) {
        if (branches_.empty()) throw std::invalid_argument("map '" + name_ + "' has no branches");
        std::sort(branches_.begin(), branches_.end(), [](const Branch& a, const Branch& b) {
            const auto& x = a.subdomain();
            const auto& y = b.subdomain();
            if (x.lo() != y.lo()) return x.lo() < y.lo();
            return x.lo_closed() && !y.lo_closed();
        });
        std::vector<Interval> pieces;
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            const auto& cur = branches_[i].subdomain();
            if (i > 0) {
                const auto& prev = branches_[i - 1].subdomain();
                const bool disjoint =
                    prev.hi() < cur.lo() || (prev.hi() == cur.lo() && !(prev.hi_closed() && cur.lo_closed()));
                if (!disjoint) {
                    throw std::invalid_argument("map '" + name_ + "': branches " + prev.to_string() +
                                                " and " + cur.to_string() + " overlap");
                }
            }
            pieces.push_back(cur);
        }
        domain_ = Domain(std::move(pieces));
    }

    static PiecewiseMap identity(const Domain& domain, std::string name = "id") {
        std::vector<Branch> branches;
        for (const auto& iv : domain.intervals()) branches.emplace_back(iv, Affine{1.0, 0.0});
        return {std::move(name), std::move(branches)};
    }

    static PiecewiseMap affine(const Interval& iv, double slope, double intercept, std::string name) {
        return {std::move(name), {Branch(iv, Affine{slope, intercept})}};
    }

    const std::string& name() const { return name_; }
    const std::vector<Branch>& branches() const { return branches_; }
    const Domain& domain() const { return domain_; }

    bool only_affine() const {
        return std::all_of(branches_.begin(), branches_.end(), [](const Branch& b) { return b.is_affine(); });
    }

    /// The unique branch covering x, or nullptr.
    const Branch* branch_at(double x) const {
        for (const auto& b : branches_) {
            if (b.subdomain().contains(x)) return &b;
        }
        return nullptr;
    }

    double operator()(double x) const {
        const Branch* b = branch_at(x);
        if (b == nullptr) {
            throw DomainError("map '" + name_ + "': " + format_real(x) + " is outside " + domain_.to_string());
        }
        return b->apply(x);
    }

    /// Union of branch images.
    Domain range() const {
        std::vector<Interval> images;
        for (const auto& b : branches_) images.push_back(b.image());
        return Domain(std::move(images));
    }

private:
    std::string name_;
    std::vector<Branch> branches_;
    Domain domain_;
};

inline double eval_map(const PiecewiseMap& m, double x) { return m(x); }

/// Solves m(x) = y for x, choosing the preimage nearest to anchor (ties go to
/// the smaller x). Constant branches within tol of y contribute their
/// subdomain point nearest to anchor. Every returned x satisfies
/// |m(x) - y| <= tol and lies in m's domain.
inline double invert_map(const PiecewiseMap& m, double y, double anchor, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("invert_map: tol must be positive");
    std::optional<double> best;
    auto consider = [&](double x) {
        if (!m.domain().contains(x)) return;
        if (std::abs(m(x) - y) > tol) return;
        if (!best) {
            best = x;
            return;
        }
        const double d_new = std::abs(x - anchor);
        const double d_old = std::abs(*best - anchor);
        if (d_new < d_old || (d_new == d_old && x < *best)) best = x;
    };

    // The anchor is its own nearest preimage when it already hits y exactly.
    if (m.domain().contains(anchor) && m(anchor) == y) return anchor;

    for (const auto& b : m.branches()) {
        const Interval& sub = b.subdomain();
        if (const auto* c = std::get_if<Constant>(&b.kind())) {
            if (std::abs(c->value - y) <= tol) consider(sub.clamp(anchor));
            continue;
        }
        const auto x = b.formula_inverse(y);
        if (!x || !std::isfinite(*x)) continue;
        if (*x < sub.lo() - tol || *x > sub.hi() + tol) continue;
        consider(sub.clamp(*x));
    }
    if (!best) {
        throw NoPreimage("map '" + m.name() + "' has no preimage of " + format_real(y) + " (range " +
                         m.range().to_string() + ")");
    }
    return *best;
}

}  // namespace fgwc
