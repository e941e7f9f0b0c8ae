#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "utimage/errors.hpp"
#include "utimage/expr.hpp"
#include "utimage/rational.hpp"
#include "utimage/utmatrix.hpp"

namespace utimage {

using Perm = std::vector<int>;

// Homogeneous multilinear polynomial of degree n in noncommuting variables
// x1..xn: a rational combination of the n! monomials x_{s(1)} ... x_{s(n)}.
// Terms are keyed by the permutation word and kept lexicographically sorted;
// zero coefficients are never stored.
class MultilinearPoly {
  public:
    using TermMap = std::map<Perm, Rat>;

    static MultilinearPoly zero(int degree) {
        if (degree < 1) throw UnsupportedSize("degree must be >= 1");
        MultilinearPoly p;
        p.degree_ = degree;
        return p;
    }

    static MultilinearPoly monomial(Perm word, Rat coeff) {
        MultilinearPoly p = zero(static_cast<int>(word.size()));
        if (!is_permutation_word(word))
            throw NotMultilinear("monomial word is not a permutation of 1..n");
        if (coeff != 0) p.terms_.emplace(std::move(word), std::move(coeff));
        return p;
    }

    int degree() const { return degree_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coefficient(const Perm& word) const {
        auto it = terms_.find(word);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const Perm& word, const Rat& coeff) {
        if (coeff == 0) return;
        auto [it, fresh] = terms_.emplace(word, coeff);
        if (!fresh) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    MultilinearPoly& operator+=(const MultilinearPoly& o) {
        require_same_degree(o);
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    MultilinearPoly& operator-=(const MultilinearPoly& o) {
        require_same_degree(o);
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    friend MultilinearPoly operator+(MultilinearPoly a, const MultilinearPoly& b) {
        a += b;
        return a;
    }
    friend MultilinearPoly operator-(MultilinearPoly a, const MultilinearPoly& b) {
        a -= b;
        return a;
    }
    MultilinearPoly scaled(const Rat& s) const {
        MultilinearPoly r = zero(degree_);
        if (s == 0) return r;
        for (const auto& [w, c] : terms_) r.terms_.emplace(w, c * s);
        return r;
    }

    bool operator==(const MultilinearPoly& o) const {
        return degree_ == o.degree_ && terms_ == o.terms_;
    }
    bool operator!=(const MultilinearPoly& o) const { return !(*this == o); }

    static bool is_permutation_word(const Perm& word) {
        std::vector<bool> seen(word.size(), false);
        for (int v : word) {
            if (v < 1 || v > static_cast<int>(word.size())) return false;
            if (seen[static_cast<std::size_t>(v - 1)]) return false;
            seen[static_cast<std::size_t>(v - 1)] = true;
        }
        return true;
    }

  private:
    MultilinearPoly() = default;
    void require_same_degree(const MultilinearPoly& o) const {
        if (degree_ != o.degree_) throw SizeMismatch("polynomial degrees differ");
    }

    int degree_ = 1;
    TermMap terms_;
};

inline Rat sum_of_coefficients(const MultilinearPoly& f) {
    Rat s(0);
    for (const auto& [w, c] : f.terms()) s += c;
    return s;
}

namespace detail {

// Element of the free associative algebra with rational coefficients, used
// only as the intermediate of expand().  max_len remembers the longest word
// that ever carried a nonzero contribution, so a fully cancelling input
// still reports a degree.
struct FreeElem {
    std::map<Perm, Rat> terms;
    int max_len = 0;

    void add(const Perm& w, const Rat& c) {
        if (c == 0) return;
        max_len = std::max(max_len, static_cast<int>(w.size()));
        auto [it, fresh] = terms.emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
};

inline FreeElem free_mul(const FreeElem& a, const FreeElem& b) {
    FreeElem r;
    r.max_len = std::max(a.max_len, b.max_len);
    for (const auto& [wa, ca] : a.terms)
        for (const auto& [wb, cb] : b.terms) {
            Perm w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            r.add(w, ca * cb);
        }
    return r;
}

inline FreeElem expand_free(const Expr& e) {
    FreeElem r;
    switch (e.kind) {
        case Expr::Kind::Variable:
            r.add(Perm{e.var}, Rat(1));
            break;
        case Expr::Kind::Scalar:
            r.add(Perm{}, e.scalar);
            break;
        case Expr::Kind::Sum:
            for (const Expr& a : e.args) {
                FreeElem fa = expand_free(a);
                r.max_len = std::max(r.max_len, fa.max_len);
                for (const auto& [w, c] : fa.terms) r.add(w, c);
            }
            break;
        case Expr::Kind::Product: {
            r.add(Perm{}, Rat(1));
            for (const Expr& a : e.args) r = free_mul(r, expand_free(a));
            break;
        }
        case Expr::Kind::Commutator: {
            r = expand_free(e.args.front());
            for (std::size_t i = 1; i < e.args.size(); ++i) {
                FreeElem b = expand_free(e.args[i]);
                FreeElem ab = free_mul(r, b);
                FreeElem ba = free_mul(b, r);
                for (const auto& [w, c] : ba.terms) ab.add(w, -c);
                r = std::move(ab);
            }
            break;
        }
    }
    return r;
}

}  // namespace detail

// Expand an expression into its multilinear normal representation.  Rejects
// inputs whose surviving monomials are not all permutations of x1..xn for a
// single n (repeated variables, missing variables, mixed degrees).  An input
// that cancels to zero yields the zero polynomial of the largest degree that
// appeared while expanding.
inline MultilinearPoly expand(const Expr& e) {
    detail::FreeElem fe = detail::expand_free(e);
    if (fe.terms.empty()) return MultilinearPoly::zero(std::max(1, fe.max_len));

    const int n = static_cast<int>(fe.terms.begin()->first.size());
    MultilinearPoly p = MultilinearPoly::zero(std::max(1, n));
    for (const auto& [w, c] : fe.terms) {
        if (static_cast<int>(w.size()) != n)
            throw NotMultilinear("expanded monomials mix degrees");
        if (!MultilinearPoly::is_permutation_word(w))
            throw NotMultilinear("expanded monomial is not a permutation of x1..x" +
                                 std::to_string(n));
        p.add_term(w, c);
    }
    return p;
}

inline MultilinearPoly expand(std::string_view text) { return expand(parse(text)); }

// Canonical printable form; parse(to_string(f)) round-trips for nonzero f.
inline std::string to_string(const MultilinearPoly& f) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [w, c] : f.terms()) {
        if (first) {
            if (c != 1) out += to_string(c) + "*";  // "-1*", "-5/2*", "3*"
            first = false;
        } else {
            out += c < 0 ? " - " : " + ";
            Rat a = c < 0 ? -c : c;
            if (a != 1) out += to_string(a) + "*";
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) out += "*";
            out += "x" + std::to_string(w[i]);
        }
    }
    return out;
}

// Evaluate f at A1..An by summing coeff * A_{s(1)} ... A_{s(n)} over the
// stored permutations.  Partial products are shared between consecutive
// permutations through their longest common prefix, which collapses the
// n! * n naive multiplication count when many terms are present.
template <CoeffRing T>
UTMatrix<T> substitute(const MultilinearPoly& f, const std::vector<UTMatrix<T>>& mats) {
    if (static_cast<int>(mats.size()) < f.degree())
        throw MissingAssignment("need a matrix for every variable x1..x" +
                                std::to_string(f.degree()));
    const int n = mats.front().size();
    for (const auto& m : mats)
        if (m.size() != n) throw SizeMismatch("substituted matrices have mixed sizes");

    UTMatrix<T> acc(n);
    std::vector<UTMatrix<T>> stack;  // stack[i] = product of the first i+1 factors
    const Perm* prev = nullptr;
    for (const auto& [w, c] : f.terms()) {
        std::size_t keep = 0;
        if (prev) {
            while (keep < w.size() && keep < prev->size() && (*prev)[keep] == w[keep]) ++keep;
        }
        stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(keep), stack.end());
        for (std::size_t i = keep; i < w.size(); ++i) {
            const auto& m = mats[static_cast<std::size_t>(w[i] - 1)];
            stack.push_back(i == 0 ? m : mat_mul(stack[i - 1], m));
        }
        acc = acc + stack.back().scaled(c);
        prev = &w;
    }
    return acc;
}

}  // namespace utimage
