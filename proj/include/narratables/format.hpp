#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace narratables::fmt {

/// 17 significant digits; round-trips every double.
inline std::string g17(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", value == 0.0 ? 0.0 : value);
    return buf;
}

inline std::string g12(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
    return buf;
}

/// Fixed-width complex rendering; components below 5e-13 print as zero.
inline std::string complex_fixed(std::complex<double> z) {
    auto clean = [](double v) { return std::abs(v) < 5e-13 ? 0.0 : v; };
    char buf[80];
    std::snprintf(buf, sizeof buf, "%+.12f %+.12fi", clean(z.real()), clean(z.imag()));
    return buf;
}

struct Style {
    bool color = false;

    std::string paint(const std::string& text, const char* code) const {
        if (!color) return text;
        return std::string("\033[") + code + "m" + text + "\033[0m";
    }
    std::string good(const std::string& text) const { return paint(text, "32"); }
    std::string warn(const std::string& text) const { return paint(text, "33"); }
    std::string bad(const std::string& text) const { return paint(text, "1;31"); }
};

} // namespace narratables::fmt
