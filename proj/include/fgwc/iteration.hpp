#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgwc/errors.hpp"
#include "fgwc/piecewise_map.hpp"
#include "fgwc/psi.hpp"
#include "fgwc/schedule.hpp"

namespace fgwc {

enum class Scheme { Picard, Coincidence, Mann, Ishikawa };

inline std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Picard: return "picard";
        case Scheme::Coincidence: return "coincidence";
        case Scheme::Mann: return "mann";
        case Scheme::Ishikawa: return "ishikawa";
    }
    return "unknown";
}

struct RunConfig {
    double x0 = 0.0;
    std::size_t max_iter = 10000;
    double conv_tol = 1e-8;
    double solve_tol = 1e-10;
    /// Known fixed point; when set, residuals are |output - target| and
    /// stopping uses them instead of successive differences.
    std::optional<double> target;

    void validate() const {
        if (!(conv_tol > 0.0) || !(solve_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
        if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
    }
};

/// One step n of a scheme. `x` is x_n. `y` is the scheme output for Picard
/// (T(x_n) = x_{n+1}), Coincidence (T(x_n)) and Mann; for Ishikawa `y` is the
/// inner value, `v` its solved preimage and `z` the output. Parity selects
/// f (even) or g (odd).
struct TraceRow {
    std::size_t n = 0;
    double x = 0.0;
    double y = 0.0;
    std::optional<double> z;
    std::optional<double> v;
    std::optional<double> residual;
    std::optional<double> alpha;
    std::optional<double> beta;

    bool even() const { return n % 2 == 0; }
    double output() const { return z ? *z : y; }
};

enum class Status { Converged, MaxIterations, SolveFailed };

inline std::string status_name(Status s) {
    switch (s) {
        case Status::Converged: return "converged";
        case Status::MaxIterations: return "max_iterations";
        case Status::SolveFailed: return "solve_failed";
    }
    return "unknown";
}

struct SolveFailure {
    std::size_t iter = 0;
    std::string stage;
    std::string message;
};

struct IterationTrace {
    Scheme scheme = Scheme::Picard;
    RunConfig config;
    std::vector<TraceRow> rows;
    /// x_0, ..., x_N: every iterate produced, including the last solved one.
    std::vector<double> iterates;
    Status status = Status::MaxIterations;
    std::optional<double> limit;
    std::size_t iterations = 0;
    std::optional<SolveFailure> failure;
    std::vector<std::string> warnings;

    std::vector<double> outputs() const {
        std::vector<double> out;
        for (const auto& r : rows) out.push_back(r.output());
        return out;
    }
    std::vector<double> residuals() const {
        std::vector<double> out;
        for (const auto& r : rows) {
            if (r.residual) out.push_back(*r.residual);
        }
        return out;
    }
};

namespace detail {

/// A step fills y/z/v/alpha/beta of the row and returns x_{n+1}.
using StepFn = std::function<double(std::size_t n, double x, TraceRow& row)>;

inline IterationTrace drive(Scheme scheme, const PiecewiseMap& t, const RunConfig& cfg, const StepFn& step) {
    cfg.validate();
    if (!t.domain().contains(cfg.x0)) {
        throw DomainError("x0 = " + format_real(cfg.x0) + " is outside " + t.domain().to_string());
    }
    IterationTrace tr;
    tr.scheme = scheme;
    tr.config = cfg;
    tr.iterates.push_back(cfg.x0);
    double x = cfg.x0;
    std::optional<double> prev_output;
    for (std::size_t n = 0; n < cfg.max_iter; ++n) {
        TraceRow row;
        row.n = n;
        row.x = x;
        double next = 0.0;
        try {
            next = step(n, x, row);
        } catch (const NoPreimage& e) {
            tr.status = Status::SolveFailed;
            tr.failure = SolveFailure{n, row.v ? "outer" : "inner", e.what()};
            if (scheme != Scheme::Ishikawa) tr.failure->stage = row.even() ? "f" : "g";
            tr.iterations = n;
            return tr;
        }
        if (!t.domain().contains(next)) {
            throw DomainError(scheme_name(scheme) + " iterate " + format_real(next) + " left the domain at step " +
                              std::to_string(n));
        }
        const double out = row.output();
        if (cfg.target) {
            row.residual = std::abs(out - *cfg.target);
        } else if (scheme == Scheme::Picard) {
            row.residual = std::abs(next - x);
        } else if (prev_output) {
            row.residual = std::abs(out - *prev_output);
        }
        prev_output = out;
        tr.rows.push_back(row);
        tr.iterates.push_back(next);
        x = next;
        if (row.residual && *row.residual <= cfg.conv_tol) {
            tr.status = Status::Converged;
            tr.limit = out;
            tr.iterations = n + 1;
            return tr;
        }
    }
    tr.status = Status::MaxIterations;
    tr.iterations = cfg.max_iter;
    return tr;
}

inline void check_shared_domain(const PiecewiseMap& t, const PiecewiseMap& f, const PiecewiseMap& g) {
    if (!(t.domain() == f.domain()) || !(t.domain() == g.domain())) {
        throw std::invalid_argument("T, f and g must share one domain");
    }
}

}  // namespace detail

/// x_{n+1} = T(x_n).
inline IterationTrace picard_iterate(const PiecewiseMap& t, const RunConfig& cfg) {
    return detail::drive(Scheme::Picard, t, cfg, [&t](std::size_t, double x, TraceRow& row) {
        row.y = t(x);
        return row.y;
    });
}

/// y_n = T(x_n), then x_{n+1} solves f(x_{n+1}) = y_n on even steps and
/// g(x_{n+1}) = y_n on odd steps, anchored at x_n.
inline IterationTrace coincidence_iterate(const PiecewiseMap& t, const PiecewiseMap& f, const PiecewiseMap& g,
                                          const RunConfig& cfg) {
    detail::check_shared_domain(t, f, g);
    return detail::drive(Scheme::Coincidence, t, cfg, [&](std::size_t n, double x, TraceRow& row) {
        row.y = t(x);
        const PiecewiseMap& h = n % 2 == 0 ? f : g;
        return invert_map(h, row.y, x, cfg.solve_tol);
    });
}

/// Modified Mann scheme for three maps:
///   y_2n   = f(x_2n+1) = (1 - a_2n) f(x_2n) + a_2n T(x_2n)
///   y_2n+1 = g(x_2n+2) = (1 - a_2n+1) g(x_2n+1) + a_2n+1 T(x_2n+1)
inline IterationTrace mann_iterate(const PiecewiseMap& t, const PiecewiseMap& f, const PiecewiseMap& g,
                                   const StepSchedule& alpha, const RunConfig& cfg) {
    detail::check_shared_domain(t, f, g);
    auto tr = detail::drive(Scheme::Mann, t, cfg, [&](std::size_t n, double x, TraceRow& row) {
        const PiecewiseMap& h = n % 2 == 0 ? f : g;
        const double a = alpha.at(n);
        row.alpha = a;
        row.y = (1.0 - a) * h(x) + a * t(x);
        return invert_map(h, row.y, x, cfg.solve_tol);
    });
    if (!alpha.divergent_sum()) tr.warnings.push_back("alpha schedule is not known to have a divergent sum");
    return tr;
}

/// Modified Mann scheme for a pair: y_n = f(x_n+1) = (1 - a_n) f(x_n) + a_n T(x_n).
inline IterationTrace mann_iterate(const PiecewiseMap& t, const PiecewiseMap& f, const StepSchedule& alpha,
                                   const RunConfig& cfg) {
    if (!(t.domain() == f.domain())) throw std::invalid_argument("T and f must share one domain");
    auto tr = detail::drive(Scheme::Mann, t, cfg, [&](std::size_t n, double x, TraceRow& row) {
        row.alpha = alpha.at(n);
        row.y = (1.0 - *row.alpha) * f(x) + *row.alpha * t(x);
        return invert_map(f, row.y, x, cfg.solve_tol);
    });
    if (!alpha.divergent_sum()) tr.warnings.push_back("alpha schedule is not known to have a divergent sum");
    return tr;
}

namespace detail {

inline void warn_ishikawa_sum(IterationTrace& tr, const StepSchedule& alpha, const StepSchedule& beta) {
    const bool known = (alpha.is_constant_positive() && beta.divergent_sum()) ||
                       (beta.is_constant_positive() && alpha.divergent_sum());
    if (!known) tr.warnings.push_back("sum of alpha_n * beta_n is not known to diverge");
}

}  // namespace detail

/// Modified Ishikawa scheme for three maps. With h = f on even and g on odd
/// steps:
///   y_n = h(v_n)     = (1 - b_n) h(x_n) + b_n T(x_n)
///   z_n = h(x_n+1)   = (1 - a_n) h(x_n) + a_n T(v_n)
inline IterationTrace ishikawa_iterate(const PiecewiseMap& t, const PiecewiseMap& f, const PiecewiseMap& g,
                                       const StepSchedule& alpha, const StepSchedule& beta, const RunConfig& cfg) {
    detail::check_shared_domain(t, f, g);
    auto tr = detail::drive(Scheme::Ishikawa, t, cfg, [&](std::size_t n, double x, TraceRow& row) {
        const PiecewiseMap& h = n % 2 == 0 ? f : g;
        const double a = alpha.at(n);
        const double b = beta.at(n);
        row.alpha = a;
        row.beta = b;
        const double hx = h(x);
        row.y = (1.0 - b) * hx + b * t(x);
        row.v = invert_map(h, row.y, x, cfg.solve_tol);
        row.z = (1.0 - a) * hx + a * t(*row.v);
        return invert_map(h, *row.z, x, cfg.solve_tol);
    });
    detail::warn_ishikawa_sum(tr, alpha, beta);
    return tr;
}

/// Modified Ishikawa scheme for a pair:
///   y_n = f(v_n) = (1 - b_n) f(x_n) + b_n T(x_n)
///   z_n = f(x_n+1) = (1 - a_n) f(x_n) + a_n T(v_n)
inline IterationTrace ishikawa_iterate(const PiecewiseMap& t, const PiecewiseMap& f, const StepSchedule& alpha,
                                       const StepSchedule& beta, const RunConfig& cfg) {
    if (!(t.domain() == f.domain())) throw std::invalid_argument("T and f must share one domain");
    auto tr = detail::drive(Scheme::Ishikawa, t, cfg, [&](std::size_t n, double x, TraceRow& row) {
        row.alpha = alpha.at(n);
        row.beta = beta.at(n);
        const double fx = f(x);
        row.y = (1.0 - *row.beta) * fx + *row.beta * t(x);
        row.v = invert_map(f, row.y, x, cfg.solve_tol);
        row.z = (1.0 - *row.alpha) * fx + *row.alpha * t(*row.v);
        return invert_map(f, *row.z, x, cfg.solve_tol);
    });
    detail::warn_ishikawa_sum(tr, alpha, beta);
    return tr;
}

struct DiagnosticReport {
    bool passed = true;
    /// "successive_psi" (d_n+1 <= d_n - psi(d_n)), "target_psi"
    /// (e_n <= e_n-1 - a_n-1 psi(e_n-1)) or "strict_decrease".
    std::string inequality;
    std::size_t checked = 0;
    /// Row index n of the first violated step.
    std::optional<std::size_t> first_violation;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Checks the residual inequality the convergence proofs rely on, step by
/// step, with absolute slack 1e-10:
///  - Coincidence: d(y_n, y_n+1) <= d(y_n-1, y_n) - psi(d(y_n-1, y_n))
///  - Mann with target z: |y_n - z| <= |y_n-1 - z| - a_n-1 psi(|y_n-1 - z|)
///  - otherwise: successive differences strictly decrease until below slack.
/// Traces with fewer than two residuals pass vacuously.
inline DiagnosticReport monotonicity_diagnostics(const IterationTrace& trace, const PsiFunction& psi,
                                                 double slack = 1e-10) {
    const auto out = trace.outputs();
    DiagnosticReport rep;

    auto record = [&](std::size_t n, double lhs, double rhs, bool ok) {
        ++rep.checked;
        if (!ok && rep.passed) {
            rep.passed = false;
            rep.first_violation = n;
            rep.lhs = lhs;
            rep.rhs = rhs;
        }
    };

    if (trace.scheme == Scheme::Mann && trace.config.target) {
        rep.inequality = "target_psi";
        const double z = *trace.config.target;
        for (std::size_t n = 1; n < out.size(); ++n) {
            const double prev = std::abs(out[n - 1] - z);
            const double cur = std::abs(out[n] - z);
            const double rhs = prev - trace.rows[n - 1].alpha.value_or(0.0) * psi(prev);
            record(n, cur, rhs, cur <= rhs + slack);
        }
        return rep;
    }

    std::vector<double> diffs;
    for (std::size_t n = 1; n < out.size(); ++n) diffs.push_back(std::abs(out[n] - out[n - 1]));
    const bool psi_form = trace.scheme == Scheme::Coincidence;
    rep.inequality = psi_form ? "successive_psi" : "strict_decrease";
    for (std::size_t i = 1; i < diffs.size(); ++i) {
        const double prev = diffs[i - 1];
        const double cur = diffs[i];
        if (psi_form) {
            const double rhs = prev - psi(prev);
            record(i + 1, cur, rhs, cur <= rhs + slack);
        } else {
            record(i + 1, cur, prev, cur < prev || prev < slack);
        }
    }
    return rep;
}

}  // namespace fgwc
