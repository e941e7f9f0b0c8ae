#pragma once

#include <bit>
#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "utimage/cpoly.hpp"
#include "utimage/errors.hpp"
#include "utimage/linalg.hpp"
#include "utimage/multilinear.hpp"
#include "utimage/pitest.hpp"
#include "utimage/utmatrix.hpp"

namespace utimage {

// One multilinear basis element of the relatively free algebra of UT_m:
// an ascending product of plain variables followed by a sequence of
// left-normed commutators.  Each commutator lists some subset S of the
// variables as [first, rest...] where first is any element of S other than
// its minimum and the rest are ascending; a term carries at most m-1
// commutators.  Prefix and commutators together partition {1..degree}.
struct BasisTerm {
    std::vector<int> prefix;
    std::vector<std::vector<int>> commutators;

    int degree() const {
        std::size_t d = prefix.size();
        for (const auto& c : commutators) d += c.size();
        return static_cast<int>(d);
    }

    Expr to_expr() const {
        std::vector<Expr> parts;
        for (int v : prefix) parts.push_back(Expr::variable(v));
        for (const auto& c : commutators) {
            std::vector<Expr> entries;
            entries.reserve(c.size());
            for (int v : c) entries.push_back(Expr::variable(v));
            parts.push_back(Expr::commutator_of(std::move(entries)));
        }
        if (parts.size() == 1) return parts.front();
        return Expr::product(std::move(parts));
    }

    std::string to_string() const {
        std::string out;
        for (int v : prefix) {
            if (!out.empty()) out += "*";
            out += "x" + std::to_string(v);
        }
        for (const auto& c : commutators) {
            if (!out.empty()) out += "*";
            out += "[";
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (i) out += ",";
                out += "x" + std::to_string(c[i]);
            }
            out += "]";
        }
        return out;
    }

    bool operator==(const BasisTerm&) const = default;
};

// Order: fewer commutators first; then by prefix (elementwise, with a longer
// prefix winning a tie so the commutator-only terms come last in their
// group); then by the commutator lists lexicographically.
inline bool basis_order_less(const BasisTerm& a, const BasisTerm& b) {
    if (a.commutators.size() != b.commutators.size())
        return a.commutators.size() < b.commutators.size();
    {
        std::size_t k = std::min(a.prefix.size(), b.prefix.size());
        for (std::size_t i = 0; i < k; ++i)
            if (a.prefix[i] != b.prefix[i]) return a.prefix[i] < b.prefix[i];
        if (a.prefix.size() != b.prefix.size()) return a.prefix.size() > b.prefix.size();
    }
    for (std::size_t i = 0; i < a.commutators.size(); ++i) {
        if (a.commutators[i] != b.commutators[i])
            return std::lexicographical_compare(
                a.commutators[i].begin(), a.commutators[i].end(),
                b.commutators[i].begin(), b.commutators[i].end());
    }
    return false;
}

namespace detail {

inline std::vector<int> mask_to_list(std::uint32_t mask) {
    std::vector<int> v;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1u) v.push_back(i + 1);
    return v;
}

inline void enumerate_blocks(std::uint32_t remaining, int blocks_left,
                             std::vector<std::vector<int>>& blocks,
                             std::vector<BasisTerm>& out) {
    out.push_back(BasisTerm{mask_to_list(remaining), blocks});
    if (blocks_left == 0) return;
    for (std::uint32_t sub = remaining; sub; sub = (sub - 1) & remaining) {
        if (std::popcount(sub) < 2) continue;
        std::vector<int> elems = mask_to_list(sub);
        for (std::size_t lead = 1; lead < elems.size(); ++lead) {
            std::vector<int> block;
            block.reserve(elems.size());
            block.push_back(elems[lead]);
            for (std::size_t i = 0; i < elems.size(); ++i)
                if (i != lead) block.push_back(elems[i]);
            blocks.push_back(std::move(block));
            enumerate_blocks(remaining & ~sub, blocks_left - 1, blocks, out);
            blocks.pop_back();
        }
    }
}

}  // namespace detail

// All multilinear basis terms of degree n for the relatively free algebra of
// UT_m, in canonical order.  The list has exactly n! entries once n is large
// enough only relative to m: products of m commutators vanish on UT_m, so
// terms carry at most m-1 of them.
inline std::vector<BasisTerm> enumerate_basis(int n, int m) {
    if (n < 1 || n > 10) throw UnsupportedSize("basis enumeration supports degrees 1..10");
    if (m < 2 || m > 5) throw UnsupportedSize("basis enumeration supports algebra sizes 2..5");
    std::vector<BasisTerm> out;
    std::vector<std::vector<int>> blocks;
    detail::enumerate_blocks((1u << n) - 1u, m - 1, blocks, out);
    std::sort(out.begin(), out.end(), basis_order_less);
    return out;
}

inline MultilinearPoly basis_term_poly(const BasisTerm& t) { return expand(t.to_expr()); }

// Coordinates of a polynomial in the canonical basis: the unique combination
// of basis terms that agrees with it identically on UT_m.
struct NormalForm {
    int degree = 1;
    int algebra_size = 2;
    std::vector<std::pair<BasisTerm, Rat>> terms;  // basis order, nonzero coefficients
};

inline MultilinearPoly reconstruct(const NormalForm& nf) {
    MultilinearPoly p = MultilinearPoly::zero(nf.degree);
    for (const auto& [t, c] : nf.terms) p += basis_term_poly(t).scaled(c);
    return p;
}

inline std::string to_string(const NormalForm& nf) {
    if (nf.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [t, c] : nf.terms) {
        if (first) {
            if (c != 1) out += to_string(c) + "*";
            first = false;
        } else {
            out += c < 0 ? " - " : " + ";
            Rat a = c < 0 ? -c : c;
            if (a != 1) out += to_string(a) + "*";
        }
        out += t.to_string();
    }
    return out;
}

// Which commutator counts appear in the normal form: first = some term with
// exactly one commutator, second = some term with exactly two.  For m = 3
// these distinguish the two generator families of non-identities with zero
// coefficient sum.
inline std::pair<bool, bool> family_support(const NormalForm& nf) {
    bool one = false, two = false;
    for (const auto& [t, c] : nf.terms) {
        if (t.commutators.size() == 1) one = true;
        if (t.commutators.size() == 2) two = true;
    }
    return {one, two};
}

struct RelfreeConfig {
    int degree_cap = 6;             // one-time setup cost grows like n! * n
    std::uint32_t slot_offset = 0;  // use a distinct generic tuple (cross-checks)
};

namespace detail {

// Reduction to the canonical basis by exact linear algebra on one generic
// evaluation.  Every permutation word is evaluated once on a tuple of generic
// UT_m matrices; equating coefficients of the generic entries position by
// position gives linear equations relating a polynomial to the basis terms.
// The equation matrix over the basis columns is echelonized once and reused
// for every polynomial of this (degree, size); correctness of each returned
// combination is certified afterwards by an exact identity test.
class NormalFormSolver {
  public:
    NormalFormSolver(int n, int m, std::uint32_t slot_offset)
        : n_(n), m_(m), tuple_(generic_tuple(m, n, slot_offset)),
          echelon_(0) {
        basis_ = enumerate_basis(n, m);
        basis_polys_.reserve(basis_.size());
        for (const auto& t : basis_) basis_polys_.push_back(basis_term_poly(t));
        echelon_ = SparseEchelon(static_cast<int>(basis_.size()));

        // row index -> (column, coefficient) accumulated over all basis terms
        std::map<int, std::map<int, Rat>> rows;
        for (std::size_t b = 0; b < basis_.size(); ++b)
            for (const auto& [w, beta] : basis_polys_[b].terms())
                for (const auto& [key, val] : word_cells(w)) {
                    Rat& slot = rows[key][static_cast<int>(b)];
                    slot += beta * val;
                    if (slot == 0) rows[key].erase(static_cast<int>(b));
                }
        for (const auto& [key, cols] : rows) {
            if (cols.empty()) continue;
            SparseVec row(cols.begin(), cols.end());
            echelon_.add_row(std::move(row), key);
            if (echelon_.full_rank()) break;
        }
        if (!echelon_.full_rank())
            throw SolveFailure("generic evaluations of the basis are dependent");
        built_keys_ = next_key_;
    }

    const std::vector<BasisTerm>& basis() const { return basis_; }
    const MultilinearPoly& basis_poly(std::size_t i) const { return basis_polys_[i]; }

    NormalForm solve(const MultilinearPoly& f) {
        if (f.degree() != n_) throw SizeMismatch("polynomial degree does not match solver");
        std::lock_guard<std::mutex> lock(mutex_);

        std::unordered_map<int, Rat> rhs;
        for (const auto& [w, alpha] : f.terms())
            for (const auto& [key, val] : word_cells(w)) {
                Rat& slot = rhs[key];
                slot += alpha * val;
                if (slot == 0) rhs.erase(key);
            }
        for (const auto& [key, val] : rhs)
            if (key >= built_keys_)
                throw SolveFailure("evaluation leaves the span of the basis");

        auto coeffs = echelon_.solve(rhs);
        if (!coeffs) throw SolveFailure("echelon system is singular");

        NormalForm nf{n_, m_, {}};
        MultilinearPoly diff = f;
        for (std::size_t b = 0; b < basis_.size(); ++b) {
            const Rat& c = (*coeffs)[b];
            if (c == 0) continue;
            nf.terms.emplace_back(basis_[b], c);
            diff -= basis_polys_[b].scaled(c);
        }
        PitestConfig check;
        check.degree_cap = std::max(check.degree_cap, n_);
        if (!is_identity(diff, m_, check).identity)
            throw SolveFailure("candidate combination fails the identity check");
        return nf;
    }

  private:
    using Key = std::pair<int, Monomial>;  // (linearized position, monomial)
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const {
            if (a.first != b.first) return a.first < b.first;
            return GrlexLess{}(a.second, b.second);
        }
    };

    const std::vector<std::pair<int, Rat>>& word_cells(const Perm& w) {
        auto it = word_cache_.find(w);
        if (it != word_cache_.end()) return it->second;
        UTMatrix<CPoly> prod = tuple_[static_cast<std::size_t>(w.front() - 1)];
        for (std::size_t i = 1; i < w.size(); ++i)
            prod = mat_mul(prod, tuple_[static_cast<std::size_t>(w[i] - 1)]);
        std::vector<std::pair<int, Rat>> cells;
        for (int i = 1; i <= m_; ++i)
            for (int j = i; j <= m_; ++j)
                for (const auto& [mono, coeff] : prod.at(i, j).terms()) {
                    Key key{i * 64 + j, mono};
                    auto [kit, fresh] = key_ids_.emplace(key, next_key_);
                    if (fresh) ++next_key_;
                    cells.emplace_back(kit->second, coeff);
                }
        return word_cache_.emplace(w, std::move(cells)).first->second;
    }

    int n_;
    int m_;
    std::vector<UTMatrix<CPoly>> tuple_;
    std::vector<BasisTerm> basis_;
    std::vector<MultilinearPoly> basis_polys_;
    std::map<Key, int, KeyLess> key_ids_;
    int next_key_ = 0;
    int built_keys_ = 0;
    std::map<Perm, std::vector<std::pair<int, Rat>>> word_cache_;
    SparseEchelon echelon_;
    std::mutex mutex_;
};

inline NormalFormSolver& solver_for(int n, int m, std::uint32_t slot_offset) {
    static std::mutex registry_mutex;
    static std::map<std::tuple<int, int, std::uint32_t>,
                    std::unique_ptr<NormalFormSolver>> registry;
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto& slot = registry[{n, m, slot_offset}];
    if (!slot) slot = std::make_unique<NormalFormSolver>(n, m, slot_offset);
    return *slot;
}

}  // namespace detail

inline NormalForm normal_form(const MultilinearPoly& f, int m,
                              const RelfreeConfig& cfg = {}) {
    if (m < 2 || m > 5) throw UnsupportedSize("normal forms support algebra sizes 2..5");
    if (f.degree() > cfg.degree_cap)
        throw DegreeCapExceeded("degree " + std::to_string(f.degree()) +
                                " exceeds the normal form cap of " +
                                std::to_string(cfg.degree_cap));
    if (f.is_zero()) return NormalForm{f.degree(), m, {}};
    return detail::solver_for(f.degree(), m, cfg.slot_offset).solve(f);
}

}  // namespace utimage
