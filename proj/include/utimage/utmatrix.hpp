#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "utimage/cpoly.hpp"
#include "utimage/errors.hpp"
#include "utimage/rational.hpp"
#include "utimage/rng.hpp"

namespace utimage {

template <typename T>
concept CoeffRing = requires(T a, T b) {
    { a + b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { a == b } -> std::convertible_to<bool>;
};

template <CoeffRing T>
struct RingTraits;

template <>
struct RingTraits<Rat> {
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static bool is_zero(const Rat& x) { return x == 0; }
    static Rat scale(const Rat& x, const Rat& c) { return x * c; }
    static std::string str(const Rat& x) { return x.str(); }
};

template <>
struct RingTraits<CPoly> {
    static CPoly zero() { return CPoly(); }
    static CPoly one() { return CPoly::constant(Rat(1)); }
    static bool is_zero(const CPoly& x) { return x.is_zero(); }
    static CPoly scale(const CPoly& x, const Rat& c) { return x.scaled(c); }
    static std::string str(const CPoly& x) { return x.to_string(); }
};

// n x n upper triangular matrix over a commutative coefficient domain. Only
// the n(n+1)/2 upper positions are stored; everything below the diagonal is
// zero by construction. Indices are 1-based throughout.
template <CoeffRing T>
class UTMatrix {
  public:
    explicit UTMatrix(int n)
        : n_(n), entries_(static_cast<std::size_t>(n) * (n + 1) / 2, RingTraits<T>::zero()) {}

    static UTMatrix identity(int n) {
        UTMatrix m(n);
        for (int i = 1; i <= n; ++i) m.at(i, i) = RingTraits<T>::one();
        return m;
    }

    static UTMatrix unit(int n, int i, int j) {
        UTMatrix m(n);
        m.at(i, j) = RingTraits<T>::one();
        return m;
    }

    template <typename S>
    static UTMatrix diagonal(const std::vector<S>& d) {
        UTMatrix m(static_cast<int>(d.size()));
        for (int i = 1; i <= m.size(); ++i) m.at(i, i) = T(d[i - 1]);
        return m;
    }

    int size() const { return n_; }

    const T& at(int i, int j) const { return entries_[index(i, j)]; }
    T& at(int i, int j) { return entries_[index(i, j)]; }

    bool is_zero() const {
        for (const T& e : entries_)
            if (!RingTraits<T>::is_zero(e)) return false;
        return true;
    }

    bool operator==(const UTMatrix& o) const { return n_ == o.n_ && entries_ == o.entries_; }
    bool operator!=(const UTMatrix& o) const { return !(*this == o); }

    UTMatrix operator+(const UTMatrix& o) const {
        check_size(o);
        UTMatrix r(n_);
        for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] + o.entries_[k];
        return r;
    }

    UTMatrix operator-(const UTMatrix& o) const {
        check_size(o);
        UTMatrix r(n_);
        for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] - o.entries_[k];
        return r;
    }

    UTMatrix scaled(const Rat& c) const {
        UTMatrix r(n_);
        for (std::size_t k = 0; k < entries_.size(); ++k)
            r.entries_[k] = RingTraits<T>::scale(entries_[k], c);
        return r;
    }

    void check_size(const UTMatrix& o) const {
        if (n_ != o.n_)
            throw SizeMismatch("matrix sizes differ: " + std::to_string(n_) + " vs " +
                               std::to_string(o.n_));
    }

  private:
    static std::size_t row_start(int n, int i) {
        return static_cast<std::size_t>(i - 1) * n - static_cast<std::size_t>(i - 1) * (i - 2) / 2;
    }
    std::size_t index(int i, int j) const { return row_start(n_, i) + (j - i); }

    int n_;
    std::vector<T> entries_;
};

template <CoeffRing T>
UTMatrix<T> mat_mul(const UTMatrix<T>& a, const UTMatrix<T>& b) {
    a.check_size(b);
    const int n = a.size();
    UTMatrix<T> r(n);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            T acc = RingTraits<T>::zero();
            for (int l = i; l <= j; ++l) acc = acc + a.at(i, l) * b.at(l, j);
            r.at(i, j) = acc;
        }
    return r;
}

// [a,b] = ab - ba throughout the library.
template <CoeffRing T>
UTMatrix<T> commutator(const UTMatrix<T>& a, const UTMatrix<T>& b) {
    return mat_mul(a, b) - mat_mul(b, a);
}

// Largest k with m in J^k, where J^k is spanned by the units E_ij with
// j - i >= k. The zero matrix reports n, a nonzero diagonal reports 0.
template <CoeffRing T>
int radical_level(const UTMatrix<T>& m) {
    const int n = m.size();
    int level = n;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            if (!RingTraits<T>::is_zero(m.at(i, j))) level = std::min(level, j - i);
    return level;
}

// The adjoint map X -> [X, D] for D = diag(d), restricted to J^k and written
// over the standard basis {E_ij : j - i >= k}. It is diagonal there, with
// eigenvalue d_j - d_i on E_ij.
struct AdOperator {
    int n = 0;
    int level = 0;
    std::vector<std::pair<int, int>> basis;
    std::vector<std::vector<Rat>> matrix;  // matrix[r][c], column c = image of basis[c]
};

inline AdOperator ad_diag(const std::vector<Rat>& d, int level) {
    AdOperator op;
    op.n = static_cast<int>(d.size());
    op.level = level;
    for (int i = 1; i <= op.n; ++i)
        for (int j = i; j <= op.n; ++j)
            if (j - i >= level) op.basis.emplace_back(i, j);
    const std::size_t dim = op.basis.size();
    op.matrix.assign(dim, std::vector<Rat>(dim, Rat(0)));
    for (std::size_t c = 0; c < dim; ++c) {
        auto [i, j] = op.basis[c];
        op.matrix[c][c] = d[j - 1] - d[i - 1];
    }
    return op;
}

// One generic matrix per substitution slot: entry (i,j) of slot s is the
// fresh commuting indeterminate t{s}_{ij}. A multilinear polynomial vanishes
// on UT_n over the rationals iff it vanishes on one such tuple.
inline std::vector<UTMatrix<CPoly>> generic_tuple(int n, int slots, std::uint32_t slot_offset = 0) {
    std::vector<UTMatrix<CPoly>> mats;
    mats.reserve(slots);
    for (int s = 1; s <= slots; ++s) {
        UTMatrix<CPoly> m(n);
        for (int i = 1; i <= n; ++i)
            for (int j = i; j <= n; ++j)
                m.at(i, j) = CPoly::variable(generic_var(s + slot_offset, i, j));
        mats.push_back(std::move(m));
    }
    return mats;
}

inline UTMatrix<Rat> random_ut_matrix(int n, Rng& rng, std::int64_t bound) {
    UTMatrix<Rat> m(n);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) m.at(i, j) = Rat(rng.uniform_int(-bound, bound));
    return m;
}

}  // namespace utimage
