#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "fgwc/errors.hpp"
#include "fgwc/expression.hpp"
#include "fgwc/real.hpp"
#include "fgwc/report.hpp"

namespace fgwc {

/// An altering-distance function psi: R+ -> R+.
class PsiFunction {
public:
    enum class Family { PowerRatio, HalfLinear, Custom };

    /// psi(t) = t^2 / (1 + t)
    static PsiFunction power_ratio() { return PsiFunction(Family::PowerRatio, "power_ratio", std::nullopt); }
    /// psi(t) = t / 2
    static PsiFunction half_linear() { return PsiFunction(Family::HalfLinear, "half_linear", std::nullopt); }
    static PsiFunction custom(const std::string& expression, std::string label = {}) {
        if (label.empty()) label = expression;
        return PsiFunction(Family::Custom, std::move(label), Expression(expression));
    }

    Family family() const { return family_; }
    const std::string& label() const { return label_; }

    std::string family_name() const {
        switch (family_) {
            case Family::PowerRatio: return "power_ratio";
            case Family::HalfLinear: return "half_linear";
            case Family::Custom: return "custom";
        }
        return "custom";
    }

    /// Expression text for Custom, empty otherwise.
    std::string expression() const { return expr_ ? expr_->text() : std::string{}; }

    double operator()(double t) const {
        if (t < 0.0) throw DomainError("psi evaluated at negative t = " + format_real(t));
        if (t == 0.0 && family_ != Family::Custom) return 0.0;
        switch (family_) {
            case Family::PowerRatio: return t * t / (1.0 + t);
            case Family::HalfLinear: return t / 2.0;
            case Family::Custom: return (*expr_)(t);
        }
        return 0.0;
    }

private:
    PsiFunction(Family family, std::string label, std::optional<Expression> expr)
        : family_(family), label_(std::move(label)), expr_(std::move(expr)) {}

    Family family_;
    std::string label_;
    std::optional<Expression> expr_;
};

inline double eval_psi(const PsiFunction& p, double t) { return p(t); }

/// Sampled membership test for the class of altering distances: psi(0) = 0,
/// nondecreasing and positive on n equally spaced points of [0, tmax], and
/// psi(tmax) > psi(tmax / 2) as a finite stand-in for psi(t) -> inf.
inline CheckReport check_psi_class(const PsiFunction& p, double tmax, std::size_t n) {
    if (!(tmax > 0.0) || n < 2) throw std::invalid_argument("check_psi_class: need tmax > 0 and n >= 2");
    CheckReport r;
    r.check = "psi_class";
    r.notes.push_back("divergence of psi is not decidable by sampling; checked psi(tmax) > psi(tmax/2) instead");

    auto fail = [&](double x, double y, double lhs, double rhs, std::string what) {
        r.passed = false;
        r.witness = Witness::at(x, y, lhs, rhs);
        r.violated = std::move(what);
        return r;
    };

    const double at_zero = p(0.0);
    r.pairs_checked = 1;
    if (at_zero != 0.0) return fail(0.0, 0.0, at_zero, 0.0, "psi(0) = 0");

    double prev_t = 0.0;
    double prev = at_zero;
    for (std::size_t i = 1; i < n; ++i) {
        const double t = i + 1 == n ? tmax : tmax * static_cast<double>(i) / static_cast<double>(n - 1);
        const double v = p(t);
        ++r.pairs_checked;
        if (!(v > 0.0)) return fail(t, t, 0.0, v, "psi(t) > 0 for t > 0");
        if (v < prev) return fail(t, prev_t, prev, v, "psi nondecreasing");
        prev_t = t;
        prev = v;
    }
    const double top = p(tmax);
    const double half = p(tmax / 2.0);
    if (!(top > half)) return fail(tmax, tmax / 2.0, half, top, "psi(tmax) > psi(tmax/2)");
    r.passed = true;
    return r;
}

}  // namespace fgwc
