#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "utimage/imageclass.hpp"
#include "utimage/multilinear.hpp"
#include "utimage/relfree.hpp"
#include "utimage/rng.hpp"

namespace utimage {

// Random multilinear polynomial of the given degree.  Four generation styles
// are interleaved so every verdict is exercised: unconstrained sparse
// combinations (usually full image), zero-sum combinations (radical powers),
// products with one or two commutator blocks, and, from degree six on,
// products of three blocks (identities of UT_3).
inline MultilinearPoly random_multilinear(Rng& rng, int degree) {
    const int style = static_cast<int>(rng.index(4));

    auto random_word = [&]() {
        Perm w(static_cast<std::size_t>(degree));
        for (int i = 0; i < degree; ++i) w[static_cast<std::size_t>(i)] = i + 1;
        rng.shuffle(w);
        return w;
    };
    auto sparse = [&](int min_terms) {
        MultilinearPoly p = MultilinearPoly::zero(degree);
        int terms = min_terms + static_cast<int>(rng.index(4));
        for (int t = 0; t < terms; ++t)
            p.add_term(random_word(), Rat(rng.nonzero_int(-5, 5)));
        return p;
    };
    auto block_product = [&](int blocks) {
        // split 1..degree into `blocks` commutator blocks of size >= 2 plus a
        // leading monomial of whatever is left over
        Perm order = random_word();
        std::vector<int> sizes(static_cast<std::size_t>(blocks), 2);
        int spare = degree - 2 * blocks;
        for (auto& s : sizes) {
            int extra = static_cast<int>(rng.index(static_cast<std::size_t>(spare + 1)));
            s += extra;
            spare -= extra;
        }
        std::vector<Expr> parts;
        std::size_t pos = 0;
        for (int i = 0; i < spare; ++i) parts.push_back(Expr::variable(order[pos++]));
        for (int s : sizes) {
            std::vector<Expr> entries;
            for (int i = 0; i < s; ++i) entries.push_back(Expr::variable(order[pos++]));
            parts.push_back(Expr::commutator_of(std::move(entries)));
        }
        Expr e = parts.size() == 1 ? parts.front() : Expr::product(std::move(parts));
        return expand(e).scaled(Rat(rng.nonzero_int(-3, 3)));
    };

    if (style == 1) {
        // zero coefficient sum: balance a sparse combination with one word
        MultilinearPoly p = sparse(2);
        Rat s = sum_of_coefficients(p);
        if (s != 0) p.add_term(random_word(), -s);
        return p;
    }
    if (style == 2 && degree >= 4) {
        MultilinearPoly p = block_product(2);
        if (rng.index(2) == 0) p += block_product(2);
        return p;
    }
    if (style == 3 && degree >= 6) {
        MultilinearPoly p = block_product(3);
        if (rng.index(2) == 0) p += block_product(3);
        return p;
    }
    if ((style == 2 || style == 3) && degree >= 2) {
        MultilinearPoly p = block_product(1);
        if (rng.index(2) == 0) p += block_product(1);
        return p;
    }
    return sparse(1);
}

struct CorpusOptions {
    int algebra_size = 3;  // 2 or 3
    int count = 200;
    int degree_min = 2;
    int degree_max = 6;
    std::uint64_t seed = 1;
    int samples = 50;
    int sample_bound = 10;
    int witness_targets = 5;
    int witness_budget = 64;
};

struct CorpusItem {
    MultilinearPoly poly;
    std::uint64_t poly_seed;  // drives the per-polynomial checks
};

inline std::vector<CorpusItem> generate_corpus(const CorpusOptions& opt) {
    if (opt.degree_min < 1 || opt.degree_max < opt.degree_min)
        throw UnsupportedSize("corpus degree range is empty");
    std::vector<CorpusItem> items;
    items.reserve(static_cast<std::size_t>(opt.count));
    Rng rng(opt.seed);
    for (int i = 0; i < opt.count; ++i) {
        int degree = opt.degree_min +
                     static_cast<int>(rng.index(
                         static_cast<std::size_t>(opt.degree_max - opt.degree_min + 1)));
        MultilinearPoly f = random_multilinear(rng, degree);
        items.push_back(CorpusItem{std::move(f), rng.next()});
    }
    return items;
}

struct CorpusEntry {
    std::string poly;
    std::string verdict;
    int radical_power = 0;
    int identity_level = 0;
    bool conjectural = false;
    bool samples_contained = false;
    bool span_rank_matches = false;
    bool witnesses_verified = false;
    bool normal_form_agrees = false;  // vacuously true when size != 3
    bool ok = false;
};

struct CorpusReport {
    CorpusOptions options;
    std::vector<CorpusEntry> entries;
    int failures = 0;
    std::vector<int> verdict_counts;  // indexed by radical power, 0 = full .. n = zero
};

// Independent verdict readout from the normal form on UT_3: a surviving
// plain monomial term means the full algebra, otherwise the commutator
// counts decide which radical power survives.
inline std::string verdict_from_normal_form(const NormalForm& nf) {
    bool full = false;
    for (const auto& [t, c] : nf.terms)
        if (t.commutators.empty()) full = true;
    if (full) return "UT3";
    auto [one, two] = family_support(nf);
    if (one) return "J";
    if (two) return "J^2";
    return "0";
}

// End-to-end check of one polynomial: classify, then challenge the verdict
// with random evaluations (containment + span dimension), exact witnesses
// for random targets in the claimed set, and (on UT_3) the normal form.
inline CorpusEntry check_poly(const MultilinearPoly& f, const CorpusOptions& opt,
                              std::uint64_t poly_seed) {
    const int n = opt.algebra_size;
    CorpusEntry entry;
    entry.poly = to_string(f);

    ImageClass cls = classify(f, n);
    entry.verdict = cls.set_name();
    entry.radical_power = cls.radical_power;
    entry.identity_level = cls.identity_level;
    entry.conjectural = cls.conjectural;
    const int k = cls.radical_power;

    SampleReport rep = sample_image(f, n, opt.samples, poly_seed, opt.sample_bound);
    entry.samples_contained = rep.min_radical_level >= k;
    entry.span_rank_matches = rep.span_rank == radical_set_dim(n, k);

    entry.witnesses_verified = true;
    Rng target_rng(poly_seed ^ 0x9e3779b97f4a7c15ull);
    for (int t = 0; t < opt.witness_targets; ++t) {
        UTMatrix<Rat> target = random_radical_matrix(n, k, target_rng, opt.sample_bound);
        try {
            WitnessConfig wc;
            wc.budget_per_rung = opt.witness_budget;
            wc.seed = target_rng.next();
            WitnessBundle w = witness_for_target(f, n, target, wc);
            if (w.achieved != target) entry.witnesses_verified = false;
        } catch (const WitnessSearchExhausted&) {
            entry.witnesses_verified = false;
        }
    }

    entry.normal_form_agrees = true;
    if (n == 3) {
        try {
            NormalForm nf = normal_form(f, 3);
            entry.normal_form_agrees = verdict_from_normal_form(nf) == entry.verdict;
        } catch (const DegreeCapExceeded&) {
            // cross-check unavailable above the normal form cap; leave vacuous
        }
    }

    entry.ok = entry.samples_contained && entry.span_rank_matches &&
               entry.witnesses_verified && entry.normal_form_agrees;
    return entry;
}

inline CorpusReport run_corpus(const CorpusOptions& opt) {
    if (opt.algebra_size != 2 && opt.algebra_size != 3)
        throw UnsupportedSize("corpus verification covers sizes 2 and 3");
    CorpusReport report;
    report.options = opt;
    report.verdict_counts.assign(static_cast<std::size_t>(opt.algebra_size) + 1, 0);
    for (const CorpusItem& item : generate_corpus(opt)) {
        CorpusEntry entry = check_poly(item.poly, opt, item.poly_seed);
        ++report.verdict_counts[static_cast<std::size_t>(entry.radical_power)];
        if (!entry.ok) ++report.failures;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace utimage
