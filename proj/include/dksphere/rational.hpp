#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace dksphere {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& q)
{
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

/// "7", "-3/2" style rendering; integers carry no denominator.
inline std::string to_string(const Rational& q)
{
    if (q.denominator() == 1) {
        return std::to_string(q.numerator());
    }
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

/// Parses "a", "a/b" or a finite decimal such as "0.25" into an exact rational.
inline Rational parse_rational(std::string_view text)
{
    auto fail = [&] { throw std::invalid_argument("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty()) {
        fail();
    }
    auto parse_int = [&](std::string_view s) -> std::int64_t {
        if (s.empty()) {
            fail();
        }
        std::size_t pos = 0;
        std::int64_t v  = 0;
        try {
            v = std::stoll(std::string(s), &pos);
        } catch (const std::exception&) {
            fail();
        }
        if (pos != s.size()) {
            fail();
        }
        return v;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto den = parse_int(text.substr(slash + 1));
        if (den == 0) {
            fail();
        }
        return Rational(parse_int(text.substr(0, slash)), den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac  = text.substr(dot + 1);
        if (frac.size() > 15 || frac.find_first_not_of("0123456789") != std::string_view::npos) {
            fail();
        }
        bool negative = !whole.empty() && whole.front() == '-';
        if (negative || (!whole.empty() && whole.front() == '+')) {
            whole.remove_prefix(1);
        }
        std::int64_t int_part = whole.empty() ? 0 : parse_int(whole);
        std::int64_t scale    = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            scale *= 10;
        }
        std::int64_t frac_part = frac.empty() ? 0 : parse_int(frac);
        Rational q(int_part * scale + frac_part, scale);
        return negative ? -q : q;
    }
    return Rational(parse_int(text));
}

}  // namespace dksphere
