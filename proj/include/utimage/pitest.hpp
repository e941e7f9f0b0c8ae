#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "utimage/cpoly.hpp"
#include "utimage/errors.hpp"
#include "utimage/multilinear.hpp"
#include "utimage/rng.hpp"
#include "utimage/utmatrix.hpp"

namespace utimage {

struct PitestConfig {
    int degree_cap = 8;            // symbolic substitution cost grows like n! * n
    std::uint32_t slot_offset = 0;  // shift generic-variable slots to mix tuples
};

// Entry of the generic evaluation that failed to vanish: f is not an identity
// of k x k upper triangular matrices because position (row, col) evaluates to
// the nonzero polynomial `value` in the generic entries.
struct IdentityCertificate {
    int row = 0;
    int col = 0;
    CPoly value;
};

struct IdentityResult {
    bool identity = false;
    std::optional<IdentityCertificate> certificate;  // set iff !identity
};

// Exact test: substitute one tuple of generic upper triangular matrices with
// independent indeterminate entries.  Over the rationals, f vanishes on this
// single tuple iff it vanishes on all of UT_k, so the outcome is a proof
// either way.
inline IdentityResult is_identity(const MultilinearPoly& f, int k,
                                  const PitestConfig& cfg = {}) {
    if (k < 1) throw UnsupportedSize("matrix size must be >= 1");
    if (f.degree() > cfg.degree_cap)
        throw DegreeCapExceeded("degree " + std::to_string(f.degree()) +
                                " exceeds the symbolic test cap of " +
                                std::to_string(cfg.degree_cap));
    if (f.is_zero()) return {true, std::nullopt};

    auto tuple = generic_tuple(k, f.degree(), cfg.slot_offset);
    UTMatrix<CPoly> value = substitute(f, tuple);
    for (int i = 1; i <= k; ++i)
        for (int j = i; j <= k; ++j)
            if (!value.at(i, j).is_zero())
                return {false, IdentityCertificate{i, j, value.at(i, j)}};
    return {true, std::nullopt};
}

// Monte Carlo variant: evaluate at `trials` tuples of random integer matrices
// with entries in [-bound, bound].  A nonzero evaluation disproves identity
// immediately; all-zero only reports "plausibly an identity".
inline bool is_identity_randomized(const MultilinearPoly& f, int k, int trials,
                                   std::uint64_t seed, int bound = 10) {
    if (k < 1) throw UnsupportedSize("matrix size must be >= 1");
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::vector<UTMatrix<Rat>> mats;
        mats.reserve(static_cast<std::size_t>(f.degree()));
        for (int v = 0; v < f.degree(); ++v) mats.push_back(random_ut_matrix(k, rng, bound));
        if (!substitute(f, mats).is_zero()) return false;
    }
    return true;
}

namespace detail {

struct LevelResult {
    int level = 0;
    // Certificate for the first size where f stops being an identity, i.e.
    // size level+1; absent when the chain ran to n_max.
    std::optional<IdentityCertificate> breaking_certificate;
};

inline LevelResult identity_level_with_certificate(const MultilinearPoly& f, int n_max,
                                                   const PitestConfig& cfg = {}) {
    if (n_max < 1) throw UnsupportedSize("identity level chain needs n_max >= 1");
    // Size-1 matrices commute, so f is an identity of UT_1 iff its
    // coefficients sum to zero; this replaces the k = 1 substitution.
    if (sum_of_coefficients(f) != 0) return {0, std::nullopt};
    int level = 1;
    while (level + 1 <= n_max) {
        IdentityResult r = is_identity(f, level + 1, cfg);
        if (!r.identity) return {level, std::move(r.certificate)};
        ++level;
    }
    return {level, std::nullopt};
}

}  // namespace detail

// Largest k in [0, n_max] such that f is an identity of UT_k (with UT_0
// understood as "no constraint", so a polynomial with nonzero coefficient
// sum reports 0).  The chain is monotone: UT_k embeds in UT_{k+1} as a
// corner, so identities only get scarcer as k grows.
inline int max_identity_level(const MultilinearPoly& f, int n_max,
                              const PitestConfig& cfg = {}) {
    return detail::identity_level_with_certificate(f, n_max, cfg).level;
}

}  // namespace utimage
