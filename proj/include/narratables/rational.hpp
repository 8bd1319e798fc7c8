#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace narratables {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Every finite double is a dyadic rational, so this conversion is exact.
inline Rational from_double(double value) { return Rational(value); }

/// "n/d" or "n" in lowest terms.
inline std::string to_string(const Rational& r) {
    const Integer num = numerator_of(r);
    const Integer den = denominator_of(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace detail

/// Parses "n/d", "n" or a plain decimal literal ("-0.75") exactly.
/// Returns nullopt on malformed text or a zero denominator.
inline std::optional<Rational> parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = trim(text.substr(0, slash));
        auto den = trim(text.substr(slash + 1));
        if (!detail::all_digits(num) || !detail::all_digits(den)) return std::nullopt;
        const Integer d{std::string(den)};
        if (d == 0) return std::nullopt;
        value = Rational(Integer{std::string(num)}, d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (whole.empty() && frac.empty()) return std::nullopt;
        if (!whole.empty() && !detail::all_digits(whole)) return std::nullopt;
        if (!frac.empty() && !detail::all_digits(frac)) return std::nullopt;
        Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
        const Integer digits{std::string(whole.empty() ? "0" : whole) + std::string(frac)};
        value = Rational(digits, scale);
    } else {
        if (!detail::all_digits(text)) return std::nullopt;
        value = Rational(Integer{std::string(text)});
    }
    return negative ? Rational(-value) : value;
}

/// Exact square root when both numerator and denominator are perfect squares.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    const Integer num = numerator_of(r);
    const Integer den = denominator_of(r);
    const Integer sn = boost::multiprecision::sqrt(num);
    const Integer sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

} // namespace narratables
