#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "utimage/errors.hpp"
#include "utimage/rational.hpp"

namespace utimage {

// Commuting indeterminates are identified by integer ids. Plain ids (< 1024)
// print as t1, t2, ...; ids at or above 1024 encode a (slot, row, col) triple
// for the entries of generic matrices and print as e.g. t2_13.
using VarId = std::uint32_t;

inline constexpr VarId kGenericVarBase = 1024;

inline VarId generic_var(std::uint32_t slot, std::uint32_t row, std::uint32_t col) {
    return (slot << 10) | (row << 5) | col;
}

inline std::string var_name(VarId id) {
    std::ostringstream os;
    if (id < kGenericVarBase) {
        os << 't' << id;
    } else {
        os << 't' << (id >> 10) << '_' << ((id >> 5) & 31) << (id & 31);
    }
    return os.str();
}

// Exponent vector: strictly increasing var ids, all exponents positive.
using Monomial = std::vector<std::pair<VarId, std::uint32_t>>;

inline std::uint64_t total_degree(const Monomial& m) {
    std::uint64_t d = 0;
    for (auto& [v, e] : m) d += e;
    return d;
}

// Graded lexicographic: compare total degree, then the exponent sequence on
// variables taken in increasing id order (higher power on an earlier variable
// sorts larger).
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        auto da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i].first != b[j].first)
                // smaller id present means a positive exponent where the other
                // side has zero, which sorts larger in lex
                return a[i].first > b[j].first;
            if (a[i].second != b[j].second) return a[i].second < b[j].second;
            ++i, ++j;
        }
        return i == a.size() && j != b.size();
    }
};

// Sparse multivariate polynomial over Rat. Zero coefficients are never stored,
// so representation equality is structural equality.
class CPoly {
  public:
    using TermMap = std::map<Monomial, Rat, GrlexLess>;

    CPoly() = default;

    static CPoly constant(Rat c) {
        CPoly p;
        if (c != 0) p.terms_.emplace(Monomial{}, std::move(c));
        return p;
    }

    static CPoly variable(VarId v) {
        CPoly p;
        p.terms_.emplace(Monomial{{v, 1}}, Rat(1));
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool operator==(const CPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const CPoly& o) const { return !(*this == o); }

    CPoly& operator+=(const CPoly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    CPoly& operator-=(const CPoly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
    friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
    CPoly operator-() const {
        CPoly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend CPoly operator*(const CPoly& a, const CPoly& b) {
        CPoly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(mul_monomial(ma, mb), ca * cb);
        return r;
    }

    CPoly scaled(const Rat& c) const {
        CPoly r;
        if (c == 0) return r;
        for (auto& [m, co] : terms_) r.terms_.emplace(m, co * c);
        return r;
    }

    // Exact evaluation; every variable of the polynomial must be assigned.
    Rat eval(const std::map<VarId, Rat>& point) const {
        Rat total(0);
        for (auto& [m, c] : terms_) {
            Rat v = c;
            for (auto& [var, exp] : m) {
                auto it = point.find(var);
                if (it == point.end())
                    throw MissingAssignment("no value assigned to " + var_name(var));
                for (std::uint32_t k = 0; k < exp; ++k) v *= it->second;
            }
            total += v;
        }
        return total;
    }

    // Canonical rendering, leading (graded-lex largest) term first.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const Rat& c = it->second;
            bool neg = c < 0;
            if (first) {
                if (neg) os << '-';
                first = false;
            } else {
                os << (neg ? " - " : " + ");
            }
            Rat a = neg ? Rat(-c) : c;
            const Monomial& m = it->first;
            if (m.empty()) {
                os << a.str();
            } else {
                bool star = false;
                if (a != 1) {
                    os << a.str();
                    star = true;
                }
                for (auto& [v, e] : m) {
                    if (star) os << '*';
                    os << var_name(v);
                    if (e > 1) os << '^' << e;
                    star = true;
                }
            }
        }
        return os.str();
    }

  private:
    void add_term(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    static Monomial mul_monomial(const Monomial& a, const Monomial& b) {
        Monomial r;
        r.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i].first < b[j].first)
                r.push_back(a[i++]);
            else if (a[i].first > b[j].first)
                r.push_back(b[j++]);
            else {
                r.emplace_back(a[i].first, a[i].second + b[j].second);
                ++i, ++j;
            }
        }
        for (; i < a.size(); ++i) r.push_back(a[i]);
        for (; j < b.size(); ++j) r.push_back(b[j]);
        return r;
    }

    TermMap terms_;
};

}  // namespace utimage
