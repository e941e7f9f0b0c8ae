#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace utimage {

// Exact arbitrary-precision scalars. cpp_rational keeps gcd(num,den)=1 and
// den>0 as internal invariants, so every value is canonical by construction.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rat& r) { return r.str(); }

// Accepts "p", "-p", "p/q", "-p/q" with decimal digits. No whitespace.
inline std::optional<Rat> rat_from_string(std::string_view s) {
    if (s.empty()) return std::nullopt;
    bool neg = false;
    if (s.front() == '-') {
        neg = true;
        s.remove_prefix(1);
    }
    auto digits = [](std::string_view t) {
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    std::string_view num = s, den = "1";
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    if (!digits(num) || !digits(den)) return std::nullopt;
    Int d{std::string(den)};
    if (d == 0) return std::nullopt;
    Rat r = Rat(Int{std::string(num)}) / Rat(d);
    return neg ? -r : r;
}

}  // namespace utimage
