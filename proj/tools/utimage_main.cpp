#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "utimage/corpus.hpp"
#include "utimage/json_io.hpp"

namespace {

using namespace utimage;

int env_degree_cap(int fallback) {
    const char* v = std::getenv("UTIMAGE_DEGREE_CAP");
    if (!v || !*v) return fallback;
    char* end = nullptr;
    long cap = std::strtol(v, &end, 10);
    if (!end || *end != '\0' || cap < 1)
        throw UnsupportedSize("UTIMAGE_DEGREE_CAP must be a positive integer");
    return static_cast<int>(cap);
}

PitestConfig pitest_config() {
    PitestConfig cfg;
    cfg.degree_cap = env_degree_cap(cfg.degree_cap);
    return cfg;
}

RelfreeConfig relfree_config() {
    RelfreeConfig cfg;
    cfg.degree_cap = env_degree_cap(cfg.degree_cap);
    return cfg;
}

std::string pretty_matrix(const UTMatrix<Rat>& m) {
    std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(m.size()));
    std::vector<std::size_t> width(static_cast<std::size_t>(m.size()), 1);
    for (int i = 1; i <= m.size(); ++i)
        for (int j = 1; j <= m.size(); ++j) {
            std::string s = j < i ? "0" : to_string(m.at(i, j));
            width[static_cast<std::size_t>(j - 1)] =
                std::max(width[static_cast<std::size_t>(j - 1)], s.size());
            cells[static_cast<std::size_t>(i - 1)].push_back(std::move(s));
        }
    std::string out;
    for (const auto& row : cells) {
        out += "[";
        for (std::size_t j = 0; j < row.size(); ++j) {
            out += " ";
            out.append(width[j] - row[j].size(), ' ');
            out += row[j];
        }
        out += " ]\n";
    }
    return out;
}

void emit(const Json& j, bool pretty, const std::string& rendered) {
    if (pretty)
        std::cout << rendered;
    else
        std::cout << j.dump(2) << "\n";
}

int cmd_classify(const std::string& expr, int n, bool conjecture, std::uint64_t seed,
                 int samples, int bound, bool pretty) {
    MultilinearPoly f = expand(expr);
    ImageClass cls = conjecture ? conjecture_predict(f, n, seed, samples, bound, pitest_config())
                                : classify(f, n, pitest_config());
    Json j = json_of(cls);
    j["poly"] = to_string(f);
    std::string rendered = "image of " + to_string(f) + " on UT" + std::to_string(n) + ": " +
                           cls.set_name() + (cls.conjectural ? " (conjectural)" : "") + "\n" +
                           "identity level: " + std::to_string(cls.identity_level) +
                           ", coefficient sum: " + to_string(cls.coefficient_sum) + "\n";
    if (cls.sampling)
        rendered += "sampling: " + std::to_string(cls.sampling->count) + " draws, min level " +
                    std::to_string(cls.sampling->min_radical_level) + ", span rank " +
                    std::to_string(cls.sampling->span_rank) + " (seed " +
                    std::to_string(cls.sampling->seed) + ")\n";
    emit(j, pretty, rendered);
    return 0;
}

int cmd_nf(const std::string& expr, int m, bool pretty) {
    MultilinearPoly f = expand(expr);
    NormalForm nf = normal_form(f, m, relfree_config());
    Json j = json_of(nf);
    j["poly"] = to_string(f);
    emit(j, pretty, to_string(nf) + "\n");
    return 0;
}

int cmd_witness(const std::string& expr, int n, const std::string& target_text,
                std::uint64_t seed, int budget, bool pretty) {
    MultilinearPoly f = expand(expr);
    Json tj;
    try {
        tj = Json::parse(target_text);
    } catch (const Json::parse_error& e) {
        throw SyntaxError("target is not valid JSON: " + std::string(e.what()), 0);
    }
    UTMatrix<Rat> target = matrix_from_json(tj, n);
    WitnessConfig cfg;
    cfg.seed = seed;
    cfg.budget_per_rung = budget;
    cfg.pitest = pitest_config();
    WitnessBundle w = witness_for_target(f, n, target, cfg);
    Json j = json_of(w);
    j["poly"] = to_string(f);
    j["seed"] = seed;
    std::string rendered = "strategy: " + w.strategy + " (attempts: " +
                           std::to_string(w.attempts) + ", seed " + std::to_string(seed) +
                           ")\ntarget:\n" + pretty_matrix(w.target);
    for (std::size_t v = 0; v < w.assignment.size(); ++v)
        rendered += "x" + std::to_string(v + 1) + " =\n" + pretty_matrix(w.assignment[v]);
    rendered += "achieved:\n" + pretty_matrix(w.achieved);
    emit(j, pretty, rendered);
    return 0;
}

int cmd_sample(const std::string& expr, int n, int count, std::uint64_t seed, int bound,
               bool pretty) {
    MultilinearPoly f = expand(expr);
    SampleReport rep = sample_image(f, n, count, seed, bound);
    Json j = json_of(rep);
    j["poly"] = to_string(f);
    std::string rendered = std::to_string(rep.count) + " samples of " + to_string(f) +
                           " on UT" + std::to_string(n) + " (seed " + std::to_string(rep.seed) +
                           ", entries in [-" + std::to_string(rep.bound) + "," +
                           std::to_string(rep.bound) + "])\nmin radical level: " +
                           std::to_string(rep.min_radical_level) +
                           "\nspan rank: " + std::to_string(rep.span_rank) + "\n";
    emit(j, pretty, rendered);
    return 0;
}

int cmd_identity(const std::string& expr, int k, bool randomized, int trials,
                 std::uint64_t seed, int bound, bool pretty) {
    MultilinearPoly f = expand(expr);
    Json j;
    j["poly"] = to_string(f);
    j["algebra_size"] = k;
    j["degree"] = f.degree();
    std::string rendered;
    if (randomized) {
        bool plausible = is_identity_randomized(f, k, trials, seed, bound);
        j["method"] = "randomized";
        j["identity"] = plausible;
        j["trials"] = trials;
        j["seed"] = seed;
        j["bound"] = bound;
        rendered = std::string(plausible ? "no counterexample in " : "refuted within ") +
                   std::to_string(trials) + " random evaluations on UT" + std::to_string(k) +
                   " (seed " + std::to_string(seed) + ")\n";
    } else {
        IdentityResult r = is_identity(f, k, pitest_config());
        j["method"] = "symbolic";
        j["identity"] = r.identity;
        if (r.certificate) {
            j["certificate"] = Json{
                {"position", position_key(r.certificate->row, r.certificate->col)},
                {"value", r.certificate->value.to_string()}};
            rendered = "not an identity of UT" + std::to_string(k) + ": entry (" +
                       position_key(r.certificate->row, r.certificate->col) +
                       ") evaluates to " + r.certificate->value.to_string() + "\n";
        } else {
            j["certificate"] = nullptr;
            rendered = "identity of UT" + std::to_string(k) + "\n";
        }
    }
    emit(j, pretty, rendered);
    return 0;
}

int cmd_corpus(const CorpusOptions& opt, bool pretty) {
    CorpusReport rep = run_corpus(opt);
    Json j = json_of(rep);
    std::string rendered = std::to_string(opt.count) + " polynomials on UT" +
                           std::to_string(opt.algebra_size) + " (seed " +
                           std::to_string(opt.seed) + "), failures: " +
                           std::to_string(rep.failures) + "\nverdicts:";
    for (std::size_t k = 0; k < rep.verdict_counts.size(); ++k)
        rendered += " " + verdict_name_for_power(opt.algebra_size, static_cast<int>(k)) + "=" +
                    std::to_string(rep.verdict_counts[k]);
    rendered += "\n";
    if (pretty) {
        for (const auto& e : rep.entries)
            if (!e.ok) rendered += "FAIL: " + e.poly + " (" + e.verdict + ")\n";
    }
    emit(j, pretty, rendered);
    if (rep.failures > 0) {
        std::cerr << rep.failures << " corpus check(s) disagreed with the classification\n";
        return 7;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"images of multilinear polynomials on upper triangular matrix algebras"};
    app.require_subcommand(1);
    app.fallthrough();
    bool pretty = false;
    app.add_flag("--pretty", pretty, "human-readable output instead of JSON");
    bool json_flag = false;
    app.add_flag("--json", json_flag, "JSON output (default)");

    std::string expr;
    int n = 3;
    std::uint64_t seed = 1;
    int samples = 50;
    int bound = 10;
    bool conjecture = false;
    int budget = 64;
    int trials = 50;
    bool randomized = false;
    std::string target_text;

    CLI::App* classify_cmd = app.add_subcommand("classify", "classify the image on UT_n");
    classify_cmd->add_option("expr", expr, "polynomial expression")->required();
    classify_cmd->add_option("--n", n, "matrix size")->capture_default_str();
    classify_cmd->add_flag("--conjecture", conjecture,
                           "allow sizes beyond the proven range (adds sampling evidence)");
    classify_cmd->add_option("--seed", seed, "sampling seed")->capture_default_str();
    classify_cmd->add_option("--samples", samples, "sampling draws")->capture_default_str();
    classify_cmd->add_option("--bound", bound, "sampling entry bound")->capture_default_str();

    CLI::App* nf_cmd = app.add_subcommand("nf", "normal form in the canonical basis");
    nf_cmd->add_option("expr", expr, "polynomial expression")->required();
    nf_cmd->add_option("--n", n, "algebra size")->capture_default_str();

    CLI::App* witness_cmd = app.add_subcommand("witness", "find an exact preimage of a target");
    witness_cmd->add_option("expr", expr, "polynomial expression")->required();
    witness_cmd->add_option("--n", n, "matrix size")->capture_default_str();
    witness_cmd->add_option("--target", target_text, "target matrix as {\"i,j\": \"p/q\"}")
        ->required();
    witness_cmd->add_option("--seed", seed, "search seed")->capture_default_str();
    witness_cmd->add_option("--budget", budget, "attempts per strategy")->capture_default_str();

    CLI::App* sample_cmd = app.add_subcommand("sample", "random evaluations of the image");
    sample_cmd->add_option("expr", expr, "polynomial expression")->required();
    sample_cmd->add_option("--n", n, "matrix size")->capture_default_str();
    sample_cmd->add_option("--count", samples, "number of draws")->capture_default_str();
    sample_cmd->add_option("--seed", seed, "sampling seed")->capture_default_str();
    sample_cmd->add_option("--bound", bound, "entry bound")->capture_default_str();

    CLI::App* identity_cmd = app.add_subcommand("identity", "test whether f vanishes on UT_n");
    identity_cmd->add_option("expr", expr, "polynomial expression")->required();
    identity_cmd->add_option("--n", n, "matrix size")->capture_default_str();
    identity_cmd->add_flag("--randomized", randomized, "Monte Carlo instead of symbolic");
    identity_cmd->add_option("--trials", trials, "randomized trials")->capture_default_str();
    identity_cmd->add_option("--seed", seed, "randomized seed")->capture_default_str();
    identity_cmd->add_option("--bound", bound, "randomized entry bound")->capture_default_str();

    CorpusOptions copt;
    CLI::App* corpus_cmd =
        app.add_subcommand("corpus", "verify the classification on a random corpus");
    corpus_cmd->add_option("--n", copt.algebra_size, "matrix size (2 or 3)")
        ->capture_default_str();
    corpus_cmd->add_option("--count", copt.count, "corpus size")->capture_default_str();
    corpus_cmd->add_option("--deg-min", copt.degree_min, "minimum degree")->capture_default_str();
    corpus_cmd->add_option("--deg-max", copt.degree_max, "maximum degree")->capture_default_str();
    corpus_cmd->add_option("--seed", copt.seed, "corpus seed")->capture_default_str();
    corpus_cmd->add_option("--samples", copt.samples, "draws per polynomial")
        ->capture_default_str();
    corpus_cmd->add_option("--witness-targets", copt.witness_targets,
                           "witness targets per polynomial")->capture_default_str();
    corpus_cmd->add_option("--budget", copt.witness_budget, "witness attempts per strategy")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
        if (classify_cmd->parsed())
            return cmd_classify(expr, n, conjecture, seed, samples, bound, pretty);
        if (nf_cmd->parsed()) return cmd_nf(expr, n, pretty);
        if (witness_cmd->parsed())
            return cmd_witness(expr, n, target_text, seed, budget, pretty);
        if (sample_cmd->parsed()) return cmd_sample(expr, n, samples, seed, bound, pretty);
        if (identity_cmd->parsed())
            return cmd_identity(expr, n, randomized, trials, seed, bound, pretty);
        if (corpus_cmd->parsed()) return cmd_corpus(copt, pretty);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const utimage::SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return 2;
    } catch (const utimage::NotMultilinear& e) {
        std::cerr << "not multilinear: " << e.what() << "\n";
        return 3;
    } catch (const utimage::UnsupportedSize& e) {
        std::cerr << "unsupported size: " << e.what() << "\n";
        return 4;
    } catch (const utimage::DegreeCapExceeded& e) {
        std::cerr << "degree cap: " << e.what() << "\n";
        return 4;
    } catch (const utimage::TargetOutsideImage& e) {
        std::cerr << "target outside image: " << e.what() << "\n";
        return 5;
    } catch (const utimage::WitnessSearchExhausted& e) {
        std::cerr << "witness search exhausted: " << e.what() << "\n";
        std::cout << Json{{"error", "witness_search_exhausted"},
                          {"evidence", utimage::json_of(e.evidence)}}
                         .dump(2)
                  << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
