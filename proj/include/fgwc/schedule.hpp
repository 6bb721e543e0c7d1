#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "fgwc/errors.hpp"
#include "fgwc/real.hpp"

namespace fgwc {

/// Step sizes alpha_n in [0, 1] for the Mann and Ishikawa schemes.
///
/// `divergent_sum()` is analytic metadata (sum alpha_n = inf), never inferred
/// from the values: true for Constant(alpha > 0) and Harmonic, whatever the
/// caller asserted for Table.
class StepSchedule {
public:
    struct Constant {
        double alpha;
    };
    /// alpha_n = min(1, c / (n + 1))
    struct Harmonic {
        double c;
    };
    /// values cycled: alpha_n = values[n mod size]
    struct Table {
        std::vector<double> values;
        bool divergent_sum;
    };

    static StepSchedule constant(double alpha) {
        check_unit(alpha);
        return StepSchedule(Constant{alpha});
    }
    static StepSchedule harmonic(double c) {
        if (!(c > 0.0)) throw ScheduleError("harmonic schedule needs c > 0");
        return StepSchedule(Harmonic{c});
    }
    static StepSchedule table(std::vector<double> values, bool divergent_sum) {
        if (values.empty()) throw ScheduleError("table schedule needs at least one value");
        for (double v : values) check_unit(v);
        return StepSchedule(Table{std::move(values), divergent_sum});
    }

    double at(std::size_t n) const {
        const double a = std::visit(
            [n](const auto& s) -> double {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Constant>) {
                    return s.alpha;
                } else if constexpr (std::is_same_v<S, Harmonic>) {
                    return std::min(1.0, s.c / static_cast<double>(n + 1));
                } else {
                    return s.values[n % s.values.size()];
                }
            },
            kind_);
        check_unit(a);
        return a;
    }

    bool divergent_sum() const {
        if (const auto* c = std::get_if<Constant>(&kind_)) return c->alpha > 0.0;
        if (std::holds_alternative<Harmonic>(kind_)) return true;
        return std::get<Table>(kind_).divergent_sum;
    }

    bool is_constant_positive() const {
        const auto* c = std::get_if<Constant>(&kind_);
        return c != nullptr && c->alpha > 0.0;
    }

    std::string describe() const {
        if (const auto* c = std::get_if<Constant>(&kind_)) return "constant(" + format_real(c->alpha) + ")";
        if (const auto* h = std::get_if<Harmonic>(&kind_)) return "harmonic(" + format_real(h->c) + ")";
        const auto& t = std::get<Table>(kind_);
        std::string out = "table(";
        for (std::size_t i = 0; i < t.values.size(); ++i) out += (i ? "," : "") + format_real(t.values[i]);
        return out + ")";
    }

private:
    explicit StepSchedule(std::variant<Constant, Harmonic, Table> kind) : kind_(std::move(kind)) {}

    static void check_unit(double a) {
        if (!(a >= 0.0 && a <= 1.0)) throw ScheduleError("step size " + format_real(a) + " outside [0, 1]");
    }

    std::variant<Constant, Harmonic, Table> kind_;
};

}  // namespace fgwc
