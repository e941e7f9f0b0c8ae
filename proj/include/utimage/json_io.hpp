#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "utimage/corpus.hpp"
#include "utimage/errors.hpp"
#include "utimage/imageclass.hpp"
#include "utimage/multilinear.hpp"
#include "utimage/relfree.hpp"
#include "utimage/utmatrix.hpp"

namespace utimage {

using Json = nlohmann::json;

inline std::string position_key(int i, int j) {
    return std::to_string(i) + "," + std::to_string(j);
}

inline Json json_of(const MultilinearPoly& f) {
    Json terms = Json::array();
    for (const auto& [w, c] : f.terms())
        terms.push_back(Json{{"perm", w}, {"coeff", to_string(c)}});
    return Json{{"degree", f.degree()}, {"terms", std::move(terms)}};
}

inline MultilinearPoly poly_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("terms"))
        throw SyntaxError("polynomial JSON needs \"degree\" and \"terms\"", 0);
    MultilinearPoly p = MultilinearPoly::zero(j.at("degree").get<int>());
    for (const auto& t : j.at("terms")) {
        Perm w = t.at("perm").get<Perm>();
        auto c = rat_from_string(t.at("coeff").get<std::string>());
        if (!c) throw SyntaxError("bad rational in polynomial JSON", 0);
        if (!MultilinearPoly::is_permutation_word(w) ||
            static_cast<int>(w.size()) != p.degree())
            throw NotMultilinear("polynomial JSON term is not a permutation of 1..n");
        p.add_term(w, *c);
    }
    return p;
}

template <CoeffRing T>
Json json_of(const UTMatrix<T>& m) {
    Json entries = Json::object();
    for (int i = 1; i <= m.size(); ++i)
        for (int j = i; j <= m.size(); ++j)
            if (!RingTraits<T>::is_zero(m.at(i, j)))
                entries[position_key(i, j)] = RingTraits<T>::str(m.at(i, j));
    return Json{{"n", m.size()}, {"entries", std::move(entries)}};
}

// Accepts either the bare sparse map {"i,j": "p/q"} or the rendered form
// {"n": n, "entries": {...}}.
inline UTMatrix<Rat> matrix_from_json(const Json& j, int n) {
    const Json* entries = &j;
    if (j.is_object() && j.contains("entries")) {
        if (j.contains("n") && j.at("n").get<int>() != n)
            throw SizeMismatch("matrix JSON size disagrees with --n");
        entries = &j.at("entries");
    }
    if (!entries->is_object()) throw SyntaxError("matrix JSON must be an object", 0);
    UTMatrix<Rat> m(n);
    for (const auto& [key, val] : entries->items()) {
        int i = 0, jj = 0;
        char comma = 0;
        std::istringstream ss(key);
        if (!(ss >> i >> comma >> jj) || comma != ',' || !ss.eof())
            throw SyntaxError("matrix key must look like \"i,j\"", 0);
        if (i < 1 || jj < i || jj > n)
            throw SizeMismatch("matrix key (" + key + ") outside the upper triangle");
        auto c = rat_from_string(val.get<std::string>());
        if (!c) throw SyntaxError("bad rational in matrix JSON", 0);
        m.at(i, jj) = *c;
    }
    return m;
}

inline Json json_of(const BasisTerm& t) {
    return Json{{"prefix", t.prefix}, {"commutators", t.commutators}};
}

inline Json json_of(const NormalForm& nf) {
    Json terms = Json::array();
    for (const auto& [t, c] : nf.terms) {
        Json jt = json_of(t);
        jt["coeff"] = to_string(c);
        terms.push_back(std::move(jt));
    }
    return Json{{"degree", nf.degree},
                {"algebra_size", nf.algebra_size},
                {"terms", std::move(terms)},
                {"rendered", to_string(nf)}};
}

inline Json json_of(const SampleReport& rep) {
    Json values = Json::array();
    for (const auto& v : rep.values) values.push_back(json_of(v));
    return Json{{"algebra_size", rep.algebra_size}, {"count", rep.count},
                {"seed", rep.seed},                 {"bound", rep.bound},
                {"min_radical_level", rep.min_radical_level},
                {"span_rank", rep.span_rank},       {"values", std::move(values)}};
}

inline Json json_of(const ImageClass& cls) {
    Json evidence;
    evidence["criterion"] =
        cls.coefficient_sum != 0 ? "sum_of_coefficients" : "identity_chain";
    if (cls.breaking_certificate) {
        evidence["nonvanishing"] =
            Json{{"position", position_key(cls.breaking_certificate->row,
                                           cls.breaking_certificate->col)},
                 {"size", cls.identity_level + 1},
                 {"value", cls.breaking_certificate->value.to_string()}};
    }
    if (cls.sampling) evidence["sampling"] = json_of(*cls.sampling);
    return Json{{"algebra", "UT" + std::to_string(cls.algebra_size)},
                {"verdict", cls.set_name()},
                {"identity_level", cls.identity_level},
                {"sum_of_coefficients", to_string(cls.coefficient_sum)},
                {"conjectural", cls.conjectural},
                {"evidence", std::move(evidence)}};
}

inline Json json_of(const WitnessBundle& w) {
    Json assignment = Json::array();
    for (const auto& m : w.assignment) assignment.push_back(json_of(m));
    return Json{{"algebra_size", w.algebra_size},
                {"target", json_of(w.target)},
                {"assignment", std::move(assignment)},
                {"achieved", json_of(w.achieved)},
                {"attempts", w.attempts},
                {"strategy", w.strategy},
                {"verified", w.achieved == w.target}};
}

inline std::string verdict_name_for_power(int n, int k) {
    if (k == 0) return "UT" + std::to_string(n);
    if (k >= n) return "0";
    return k == 1 ? "J" : "J^" + std::to_string(k);
}

inline Json json_of(const CorpusEntry& e) {
    return Json{{"poly", e.poly},
                {"verdict", e.verdict},
                {"identity_level", e.identity_level},
                {"checks", Json{{"samples_contained", e.samples_contained},
                                {"span_rank", e.span_rank_matches},
                                {"witnesses", e.witnesses_verified},
                                {"normal_form", e.normal_form_agrees}}},
                {"ok", e.ok}};
}

inline Json json_of(const CorpusReport& rep) {
    const auto& o = rep.options;
    Json counts = Json::object();
    for (std::size_t k = 0; k < rep.verdict_counts.size(); ++k)
        counts[verdict_name_for_power(o.algebra_size, static_cast<int>(k))] =
            rep.verdict_counts[k];
    Json entries = Json::array();
    for (const auto& e : rep.entries) entries.push_back(json_of(e));
    return Json{{"options", Json{{"algebra_size", o.algebra_size},
                                 {"count", o.count},
                                 {"degree_min", o.degree_min},
                                 {"degree_max", o.degree_max},
                                 {"seed", o.seed},
                                 {"samples", o.samples},
                                 {"witness_targets", o.witness_targets}}},
                {"failures", rep.failures},
                {"verdict_counts", std::move(counts)},
                {"entries", std::move(entries)}};
}

}  // namespace utimage
