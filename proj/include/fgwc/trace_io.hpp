#pragma once

#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "fgwc/iteration.hpp"
#include "fgwc/real.hpp"

namespace fgwc {

inline constexpr const char* kTraceCsvHeader = "n,parity,x_n,y_n,z_n,v_n,residual,alpha_n,beta_n";

/// Plot-ready CSV of a trace: one line per step, 17 significant digits,
/// empty fields for columns the scheme does not produce.
inline void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
    auto field = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string{}; };
    os << kTraceCsvHeader << '\n';
    for (const auto& r : trace.rows) {
        os << r.n << ',' << (r.even() ? "even" : "odd") << ',' << format_real(r.x) << ',' << format_real(r.y) << ','
           << field(r.z) << ',' << field(r.v) << ',' << field(r.residual) << ',' << field(r.alpha) << ','
           << field(r.beta) << '\n';
    }
}

inline std::string trace_csv(const IterationTrace& trace) {
    std::ostringstream os;
    write_trace_csv(os, trace);
    return os.str();
}

}  // namespace fgwc
