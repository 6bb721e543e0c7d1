#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

#include "fgwc/errors.hpp"

namespace fgwc {

namespace detail {

inline double parse_plain_real(std::string_view text, std::string_view whole) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError("not a real number: '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace detail

/// Parses "0.55", "-1e-6" or a rational "4/3". A rational is converted with
/// a single division of its two parsed parts.
inline double parse_real(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return detail::parse_plain_real(text, text);
    }
    const double num = detail::parse_plain_real(text.substr(0, slash), text);
    const double den = detail::parse_plain_real(text.substr(slash + 1), text);
    if (den == 0.0) {
        throw ParseError("zero denominator: '" + std::string(text) + "'");
    }
    return num / den;
}

/// Shortest-roundtrip-safe text form (17 significant digits).
inline std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace fgwc
