#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <utility>

#include "fgwc/errors.hpp"

namespace fgwc {

/// A real function of one variable `t`, parsed from text such as
/// "t^2/(1+t)" or "0.1*t". Supports + - * / ^, unary minus, parentheses and
/// the functions sqrt, exp, log, log1p, abs.
class Expression {
public:
    explicit Expression(std::string text) : text_(std::move(text)) {
        Parser p{text_, 0};
        fn_ = p.parse_sum();
        p.skip_space();
        if (p.pos != text_.size()) p.fail("unexpected trailing input");
    }

    double operator()(double t) const { return fn_(t); }
    const std::string& text() const { return text_; }

private:
    using Fn = std::function<double(double)>;

    struct Parser {
        std::string_view src;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& what) const {
            throw ParseError("expression '" + std::string(src) + "': " + what + " at offset " +
                             std::to_string(pos));
        }

        void skip_space() {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        }

        bool accept(char c) {
            skip_space();
            if (pos < src.size() && src[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        Fn parse_sum() {
            Fn lhs = parse_product();
            for (;;) {
                if (accept('+')) {
                    Fn rhs = parse_product();
                    lhs = [lhs, rhs](double t) { return lhs(t) + rhs(t); };
                } else if (accept('-')) {
                    Fn rhs = parse_product();
                    lhs = [lhs, rhs](double t) { return lhs(t) - rhs(t); };
                } else {
                    return lhs;
                }
            }
        }

        Fn parse_product() {
            Fn lhs = parse_unary();
            for (;;) {
                if (accept('*')) {
                    Fn rhs = parse_unary();
                    lhs = [lhs, rhs](double t) { return lhs(t) * rhs(t); };
                } else if (accept('/')) {
                    Fn rhs = parse_unary();
                    lhs = [lhs, rhs](double t) { return lhs(t) / rhs(t); };
                } else {
                    return lhs;
                }
            }
        }

        Fn parse_unary() {
            if (accept('-')) {
                Fn inner = parse_unary();
                return [inner](double t) { return -inner(t); };
            }
            if (accept('+')) return parse_unary();
            return parse_power();
        }

        Fn parse_power() {
            Fn base = parse_primary();
            if (accept('^')) {
                Fn exponent = parse_unary();
                return [base, exponent](double t) { return std::pow(base(t), exponent(t)); };
            }
            return base;
        }

        Fn parse_primary() {
            skip_space();
            if (pos >= src.size()) fail("unexpected end");
            if (accept('(')) {
                Fn inner = parse_sum();
                if (!accept(')')) fail("expected ')'");
                return inner;
            }
            const char c = src[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                double value = 0.0;
                auto [ptr, ec] = std::from_chars(src.data() + pos, src.data() + src.size(), value);
                if (ec != std::errc{}) fail("bad number");
                pos = static_cast<std::size_t>(ptr - src.data());
                return [value](double) { return value; };
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                const std::size_t start = pos;
                while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
                    ++pos;
                }
                const std::string_view name = src.substr(start, pos - start);
                if (name == "t") return [](double t) { return t; };
                double (*unary)(double) = nullptr;
                if (name == "sqrt") unary = [](double v) { return std::sqrt(v); };
                else if (name == "exp") unary = [](double v) { return std::exp(v); };
                else if (name == "log") unary = [](double v) { return std::log(v); };
                else if (name == "log1p") unary = [](double v) { return std::log1p(v); };
                else if (name == "abs") unary = [](double v) { return std::abs(v); };
                else fail("unknown identifier '" + std::string(name) + "'");
                if (!accept('(')) fail("expected '(' after function name");
                Fn arg = parse_sum();
                if (!accept(')')) fail("expected ')'");
                return [unary, arg](double t) { return unary(arg(t)); };
            }
            fail(std::string("unexpected character '") + c + "'");
        }
    };

    std::string text_;
    Fn fn_;
};

}  // namespace fgwc
