#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "utimage/errors.hpp"
#include "utimage/linalg.hpp"
#include "utimage/multilinear.hpp"
#include "utimage/pitest.hpp"
#include "utimage/relfree.hpp"
#include "utimage/rng.hpp"
#include "utimage/utmatrix.hpp"

namespace utimage {

enum class Verdict { Zero, RadicalPower, Full };

// Evidence gathered by evaluating f at random integer tuples.
struct SampleReport {
    int algebra_size = 2;
    int count = 0;
    std::uint64_t seed = 0;
    int bound = 10;
    int min_radical_level = 0;  // over the sampled values; n when all vanish
    int span_rank = 0;          // dimension of the linear span of the values
    std::vector<UTMatrix<Rat>> values;
};

// The image of a multilinear polynomial on UT_n, described as one of the
// canonical candidates: {0}, a power of the radical J^k, or all of UT_n.
struct ImageClass {
    int algebra_size = 2;
    Verdict verdict = Verdict::Zero;
    int radical_power = 0;  // k with image J^k; 0 for Full (J^0 = UT_n), n for Zero
    int identity_level = 0;
    Rat coefficient_sum;
    bool conjectural = false;
    std::optional<IdentityCertificate> breaking_certificate;
    std::optional<SampleReport> sampling;

    std::string set_name() const {
        switch (verdict) {
            case Verdict::Full: return "UT" + std::to_string(algebra_size);
            case Verdict::Zero: return "0";
            case Verdict::RadicalPower:
                return radical_power == 1 ? "J" : "J^" + std::to_string(radical_power);
        }
        return "?";
    }
};

inline int radical_set_dim(int n, int k) {
    int w = n - k;
    return w <= 0 ? 0 : w * (w + 1) / 2;
}

namespace detail {

inline ImageClass classify_impl(const MultilinearPoly& f, int n, const PitestConfig& cfg) {
    ImageClass cls;
    cls.algebra_size = n;
    cls.coefficient_sum = sum_of_coefficients(f);
    if (cls.coefficient_sum != 0) {
        cls.verdict = Verdict::Full;
        cls.radical_power = 0;
        cls.identity_level = 0;
        return cls;
    }
    LevelResult lr = identity_level_with_certificate(f, n, cfg);
    cls.identity_level = lr.level;
    cls.breaking_certificate = std::move(lr.breaking_certificate);
    if (lr.level >= n) {
        cls.verdict = Verdict::Zero;
        cls.radical_power = n;
    } else {
        cls.verdict = Verdict::RadicalPower;
        cls.radical_power = lr.level;
    }
    return cls;
}

}  // namespace detail

// Exact classification of the image on UT_n for n = 2 or 3: a nonzero
// coefficient sum forces the whole algebra, and otherwise the image is
// precisely J^k for the largest k with f an identity of UT_k.
inline ImageClass classify(const MultilinearPoly& f, int n, const PitestConfig& cfg = {}) {
    if (n != 2 && n != 3)
        throw UnsupportedSize("exact classification covers sizes 2 and 3; "
                              "use the conjectural predictor for larger sizes");
    return detail::classify_impl(f, n, cfg);
}

inline SampleReport sample_image(const MultilinearPoly& f, int n, int count,
                                 std::uint64_t seed, int bound = 10) {
    if (n < 1) throw UnsupportedSize("matrix size must be >= 1");
    SampleReport rep;
    rep.algebra_size = n;
    rep.count = count;
    rep.seed = seed;
    rep.bound = bound;
    rep.min_radical_level = n;
    Rng rng(seed);
    const int dim = n * (n + 1) / 2;
    MatQ span(std::max(count, 1), dim);
    for (int t = 0; t < count; ++t) {
        std::vector<UTMatrix<Rat>> mats;
        mats.reserve(static_cast<std::size_t>(f.degree()));
        for (int v = 0; v < f.degree(); ++v) mats.push_back(random_ut_matrix(n, rng, bound));
        UTMatrix<Rat> val = substitute(f, mats);
        rep.min_radical_level = std::min(rep.min_radical_level, radical_level(val));
        int c = 0;
        for (int i = 1; i <= n; ++i)
            for (int j = i; j <= n; ++j) span.at(t, c++) = val.at(i, j);
        rep.values.push_back(std::move(val));
    }
    rep.span_rank = count == 0 ? 0 : rank(span);
    return rep;
}

// Classification for sizes where only containment is proven.  The verdict
// mapping is the same identity-level computation; when it lands on a proper
// radical power the equality claim is flagged conjectural and random
// evaluations are attached as supporting evidence.
inline ImageClass conjecture_predict(const MultilinearPoly& f, int n, std::uint64_t seed,
                                     int samples = 50, int bound = 10,
                                     const PitestConfig& cfg = {}) {
    if (n < 2) throw UnsupportedSize("matrix size must be >= 2");
    ImageClass cls = detail::classify_impl(f, n, cfg);
    cls.conjectural = cls.verdict == Verdict::RadicalPower && n >= 4;
    cls.sampling = sample_image(f, n, samples, seed, bound);
    return cls;
}

// A verified preimage: substituting `assignment` into f yields exactly
// `target` (achieved stores the re-evaluation).
struct WitnessBundle {
    int algebra_size = 2;
    UTMatrix<Rat> target{2};
    std::vector<UTMatrix<Rat>> assignment;
    UTMatrix<Rat> achieved{2};
    int attempts = 0;
    std::string strategy;
};

class WitnessSearchExhausted : public std::runtime_error {
  public:
    WitnessSearchExhausted(const std::string& msg, SampleReport ev)
        : std::runtime_error(msg), evidence(std::move(ev)) {}
    SampleReport evidence;
};

struct WitnessConfig {
    int budget_per_rung = 64;
    std::uint64_t seed = 2024;
    int evidence_samples = 50;
    int bound = 10;
    PitestConfig pitest;
};

namespace detail {

inline std::vector<Rat> flatten(const UTMatrix<Rat>& m) {
    std::vector<Rat> v;
    v.reserve(static_cast<std::size_t>(m.size() * (m.size() + 1) / 2));
    for (int i = 1; i <= m.size(); ++i)
        for (int j = i; j <= m.size(); ++j) v.push_back(m.at(i, j));
    return v;
}

// Superdiagonal shift: nonzero ad-images of it against a distinct diagonal
// stay supported on the superdiagonal.
inline UTMatrix<Rat> shift_matrix(int n) {
    UTMatrix<Rat> u(n);
    for (int i = 1; i < n; ++i) u.at(i, i + 1) = 1;
    return u;
}

inline UTMatrix<Rat> arithmetic_diag(int n, int step, int start) {
    std::vector<Rat> d;
    d.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d.emplace_back(start + step * i);
    return UTMatrix<Rat>::diagonal(d);
}

// f restricted to one free slot is linear; solve that linear map for the
// target exactly and accept only if re-evaluation reproduces the target.
inline std::optional<std::vector<UTMatrix<Rat>>> try_free_slot(
    const MultilinearPoly& f, std::vector<UTMatrix<Rat>> assignment, int free_var,
    const UTMatrix<Rat>& target) {
    const int n = target.size();
    const int dim = n * (n + 1) / 2;
    MatQ mapmat(dim, dim);
    int c = 0;
    for (int p = 1; p <= n; ++p)
        for (int q = p; q <= n; ++q) {
            assignment[static_cast<std::size_t>(free_var - 1)] = UTMatrix<Rat>::unit(n, p, q);
            std::vector<Rat> col = flatten(substitute(f, assignment));
            for (int r = 0; r < dim; ++r) mapmat.at(r, c) = col[static_cast<std::size_t>(r)];
            ++c;
        }
    auto x = solve_linear(mapmat, flatten(target));
    if (!x) return std::nullopt;
    UTMatrix<Rat> free_value(n);
    int idx = 0;
    for (int p = 1; p <= n; ++p)
        for (int q = p; q <= n; ++q) free_value.at(p, q) = (*x)[static_cast<std::size_t>(idx++)];
    assignment[static_cast<std::size_t>(free_var - 1)] = std::move(free_value);
    if (substitute(f, assignment) == target) return assignment;
    return std::nullopt;
}

// Pattern assignment derived from a basis term: prefix variables become the
// identity; in every commutator block the chosen free variable's block mates
// become D, and each other block contributes one shift matrix (its minimum)
// with the rest D, so that no block collapses to zero.
inline std::vector<UTMatrix<Rat>> pattern_assignment(int n, int degree, const BasisTerm& term,
                                                     int free_var, const UTMatrix<Rat>& d_mat) {
    std::vector<UTMatrix<Rat>> assignment(static_cast<std::size_t>(degree),
                                          UTMatrix<Rat>::identity(n));
    for (const auto& block : term.commutators) {
        bool holds_free =
            std::find(block.begin(), block.end(), free_var) != block.end();
        int min_var = *std::min_element(block.begin(), block.end());
        for (int v : block) {
            if (v == free_var) continue;
            if (!holds_free && v == min_var)
                assignment[static_cast<std::size_t>(v - 1)] = shift_matrix(n);
            else
                assignment[static_cast<std::size_t>(v - 1)] = d_mat;
        }
    }
    return assignment;
}

}  // namespace detail

// Search for an exact preimage of `target` under f on UT_n (n = 2 or 3),
// escalating through strategies: direct scaling of a random hit when the
// image line is one-dimensional, structured assignments derived from the
// normal form, the same patterns swept over several diagonals, and finally
// randomized assignments.  Every candidate is confirmed by exact
// re-evaluation before being returned.
inline WitnessBundle witness_for_target(const MultilinearPoly& f, int n,
                                        const UTMatrix<Rat>& target,
                                        const WitnessConfig& cfg = {}) {
    if (target.size() != n) throw SizeMismatch("target size does not match the algebra");
    ImageClass cls = classify(f, n, cfg.pitest);
    const int k = cls.radical_power;
    if (radical_level(target) < k)
        throw TargetOutsideImage("target does not lie in " + cls.set_name());

    const int d = f.degree();
    Rng rng(cfg.seed);
    int attempts = 0;
    WitnessBundle bundle;
    bundle.algebra_size = n;
    bundle.target = target;

    auto finish = [&](std::vector<UTMatrix<Rat>> assignment, const char* strategy) {
        bundle.assignment = std::move(assignment);
        bundle.achieved = substitute(f, bundle.assignment);
        bundle.attempts = attempts;
        bundle.strategy = strategy;
        return bundle;
    };

    if (cls.verdict == Verdict::Zero) {
        std::vector<UTMatrix<Rat>> zeros(static_cast<std::size_t>(d), UTMatrix<Rat>(n));
        return finish(std::move(zeros), "zero");
    }

    // Scaling: when the image is the line J^{n-1}, any nonzero random value
    // can be rescaled through one variable (f is linear in each slot).
    if (cls.verdict == Verdict::RadicalPower && k == n - 1) {
        for (int t = 0; t < cfg.budget_per_rung; ++t) {
            ++attempts;
            std::vector<UTMatrix<Rat>> mats;
            mats.reserve(static_cast<std::size_t>(d));
            for (int v = 0; v < d; ++v) mats.push_back(random_ut_matrix(n, rng, cfg.bound));
            UTMatrix<Rat> val = substitute(f, mats);
            if (val.is_zero()) continue;
            Rat mu = val.at(1, n);
            if (mu == 0) continue;  // cannot happen below the identity level, but stay safe
            mats.front() = mats.front().scaled(target.at(1, n) / mu);
            if (substitute(f, mats) == target) return finish(std::move(mats), "scaling");
        }
    }

    // Structured patterns from the normal form (or the trivial pattern when
    // the image is everything).
    std::vector<BasisTerm> candidates;
    if (cls.verdict == Verdict::Full) {
        std::vector<int> all(static_cast<std::size_t>(d));
        for (int v = 1; v <= d; ++v) all[static_cast<std::size_t>(v - 1)] = v;
        candidates.push_back(BasisTerm{all, {}});
    } else {
        try {
            NormalForm nf = normal_form(f, n);
            for (const auto& [t, c] : nf.terms)
                if (static_cast<int>(t.commutators.size()) == k) candidates.push_back(t);
            std::stable_sort(candidates.begin(), candidates.end(),
                             [](const BasisTerm& a, const BasisTerm& b) {
                                 std::size_t la = 0, lb = 0;
                                 for (const auto& blk : a.commutators) la += blk.size();
                                 for (const auto& blk : b.commutators) lb += blk.size();
                                 return la < lb;
                             });
        } catch (const DegreeCapExceeded&) {
            // fall through to the sweep and randomized rungs
        }
    }

    auto free_vars_of = [&](const BasisTerm& term) {
        std::vector<int> vars;
        if (term.commutators.empty()) {
            for (int v = 1; v <= d; ++v) vars.push_back(v);
        } else {
            for (const auto& block : term.commutators)
                vars.insert(vars.end(), block.begin(), block.end());
            std::sort(vars.begin(), vars.end());
        }
        return vars;
    };

    {
        int used = 0;
        UTMatrix<Rat> d_mat = detail::arithmetic_diag(n, 1, 0);
        for (const auto& term : candidates) {
            if (used >= cfg.budget_per_rung) break;
            for (int v : free_vars_of(term)) {
                if (used >= cfg.budget_per_rung) break;
                ++used;
                ++attempts;
                auto got = detail::try_free_slot(
                    f, detail::pattern_assignment(n, d, term, v, d_mat), v, target);
                if (got) return finish(std::move(*got), "pattern");
            }
        }
    }

    // Same patterns over a spread of distinct diagonals, plus the blunt
    // "everything else is D" assignment.
    {
        int used = 0;
        const int params[4][2] = {{1, 1}, {2, 1}, {3, 2}, {1, -3}};
        for (const auto& p : params) {
            if (used >= cfg.budget_per_rung) break;
            UTMatrix<Rat> d_mat = detail::arithmetic_diag(n, p[0], p[1]);
            for (int v = 1; v <= d && used < cfg.budget_per_rung; ++v) {
                ++used;
                ++attempts;
                std::vector<UTMatrix<Rat>> blunt(static_cast<std::size_t>(d), d_mat);
                if (auto got = detail::try_free_slot(f, std::move(blunt), v, target))
                    return finish(std::move(*got), "pattern-sweep");
            }
            for (const auto& term : candidates) {
                if (used >= cfg.budget_per_rung) break;
                for (int v : free_vars_of(term)) {
                    if (used >= cfg.budget_per_rung) break;
                    ++used;
                    ++attempts;
                    auto got = detail::try_free_slot(
                        f, detail::pattern_assignment(n, d, term, v, d_mat), v, target);
                    if (got) return finish(std::move(*got), "pattern-sweep");
                }
            }
        }
    }

    for (int t = 0; t < cfg.budget_per_rung; ++t) {
        ++attempts;
        int v = 1 + t % d;
        std::vector<UTMatrix<Rat>> mats;
        mats.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) mats.push_back(random_ut_matrix(n, rng, cfg.bound));
        if (auto got = detail::try_free_slot(f, std::move(mats), v, target))
            return finish(std::move(*got), "random");
    }

    throw WitnessSearchExhausted(
        "no preimage found within the attempt budget",
        sample_image(f, n, cfg.evidence_samples, cfg.seed, cfg.bound));
}

inline UTMatrix<Rat> random_radical_matrix(int n, int k, Rng& rng, int bound = 10) {
    UTMatrix<Rat> m(n);
    for (int i = 1; i <= n; ++i)
        for (int j = i + k; j <= n; ++j) m.at(i, j) = Rat(rng.uniform_int(-bound, bound));
    return m;
}

}  // namespace utimage
