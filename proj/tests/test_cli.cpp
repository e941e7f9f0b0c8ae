#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "schema_check.hpp"

namespace {

using Json = nlohmann::json;

const std::string kCli = UTIMAGE_CLI_PATH;
const std::string kSchemaDir = UTIMAGE_SCHEMA_DIR;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Run through /bin/sh; stderr is dropped so stdout stays parseable.
RunResult run(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix + "'" + kCli + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Json parse_out(const RunResult& r) {
    Json j;
    REQUIRE_NOTHROW(j = Json::parse(r.out));
    return j;
}

void conforms(const Json& j, const std::string& schema) {
    try {
        schemacheck::validate(j, kSchemaDir, schema);
    } catch (const std::exception& e) {
        FAIL("schema violation: " << e.what() << "\n" << j.dump(2));
    }
}

}  // namespace

TEST_CASE("classify emits a schema-conforming verdict") {
    RunResult r = run("classify '[x1,x2]' --n 3");
    REQUIRE(r.exit_code == 0);
    Json j = parse_out(r);
    conforms(j, "classify.schema.json");
    CHECK(j.at("verdict") == "J");
    CHECK(j.at("poly") == "x1*x2 - x2*x1");
    CHECK(j.at("identity_level") == 1);

    Json full = parse_out(run("classify 'x1' --n 2"));
    CHECK(full.at("verdict") == "UT2");
    Json zero = parse_out(run("classify '[x1,x2][x3,x4][x5,x6]'"));
    CHECK(zero.at("verdict") == "0");
    Json j2 = parse_out(run("classify '[x1,x2][x3,x4]'"));
    CHECK(j2.at("verdict") == "J^2");
}

TEST_CASE("classify --conjecture attaches sampling evidence") {
    RunResult r = run("classify '[x1,x2]' --n 4 --conjecture --seed 5 --samples 12");
    REQUIRE(r.exit_code == 0);
    Json j = parse_out(r);
    conforms(j, "classify.schema.json");
    CHECK(j.at("conjectural") == true);
    CHECK(j.at("evidence").at("sampling").at("count") == 12);
    CHECK(j.at("evidence").at("sampling").at("seed") == 5);

    // sizes beyond the proven range need the explicit flag
    CHECK(run("classify '[x1,x2]' --n 4").exit_code == 4);
}

TEST_CASE("classify --pretty renders a summary") {
    RunResult r = run("classify '[x1,x2]' --n 3 --pretty");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out ==
          "image of x1*x2 - x2*x1 on UT3: J\nidentity level: 1, coefficient sum: 0\n");
}

TEST_CASE("identical invocations are byte-identical") {
    std::string args = "classify '[x1,x2]' --n 4 --conjecture --seed 42";
    CHECK(run(args).out == run(args).out);
    std::string wargs = "witness '[x1,x2]' --n 3 --target '{\"1,2\": \"3\"}' --seed 7";
    CHECK(run(wargs).out == run(wargs).out);
}

TEST_CASE("nf emits coordinates and a rendering") {
    RunResult r = run("nf 'x2*x1' --n 3");
    REQUIRE(r.exit_code == 0);
    Json j = parse_out(r);
    conforms(j, "nf.schema.json");
    CHECK(j.at("rendered") == "x1*x2 + [x2,x1]");
    CHECK(run("nf 'x2*x1' --pretty").out == "x1*x2 + [x2,x1]\n");
    CHECK(run("nf '[x1,x2][x3,x4][x5,x6]' --pretty").out == "0\n");
}

TEST_CASE("witness returns a verified assignment") {
    RunResult r = run("witness '[x1,x2][x3,x4]' --n 3 --target '{\"1,3\": \"5/2\"}' --seed 9");
    REQUIRE(r.exit_code == 0);
    Json j = parse_out(r);
    conforms(j, "witness.schema.json");
    CHECK(j.at("verified") == true);
    CHECK(j.at("seed") == 9);
    CHECK(j.at("achieved").at("entries") == Json{{"1,3", "5/2"}});

    // wrapped matrix form is accepted too
    RunResult w = run(
        "witness '[x1,x2]' --n 2 --target '{\"n\": 2, \"entries\": {\"1,2\": \"-4\"}}'");
    REQUIRE(w.exit_code == 0);
    CHECK(parse_out(w).at("verified") == true);
}

TEST_CASE("sample reports span statistics") {
    RunResult r = run("sample '[x1,x2]' --n 3 --count 10 --seed 3");
    REQUIRE(r.exit_code == 0);
    Json j = parse_out(r);
    conforms(j, "sample.schema.json");
    CHECK(j.at("count") == 10);
    CHECK(j.at("values").size() == 10);
    CHECK(j.at("span_rank") == 3);
    CHECK(j.at("min_radical_level") == 1);
}

TEST_CASE("identity emits certificates") {
    Json yes = parse_out(run("identity '[x1,x2]' --n 1"));
    conforms(yes, "identity.schema.json");
    CHECK(yes.at("identity") == true);
    CHECK(yes.at("certificate").is_null());
    CHECK(yes.at("method") == "symbolic");

    Json no = parse_out(run("identity '[x1,x2]' --n 2"));
    conforms(no, "identity.schema.json");
    CHECK(no.at("identity") == false);
    CHECK(no.at("certificate").at("position") == "1,2");

    Json rand = parse_out(run("identity '[x1,x2][x3,x4]' --n 2 --randomized --trials 8 --seed 4"));
    conforms(rand, "identity.schema.json");
    CHECK(rand.at("method") == "randomized");
    CHECK(rand.at("identity") == true);
    CHECK(rand.at("trials") == 8);
}

TEST_CASE("corpus verifies and reports verdict counts") {
    RunResult r = run("corpus --count 5 --seed 1");
    REQUIRE(r.exit_code == 0);
    Json j = parse_out(r);
    conforms(j, "corpus.schema.json");
    CHECK(j.at("failures") == 0);
    CHECK(j.at("entries").size() == 5);

    RunResult two = run("corpus --n 2 --count 4 --seed 2 --pretty");
    REQUIRE(two.exit_code == 0);
    CHECK(two.out.find("failures: 0") != std::string::npos);
}

TEST_CASE("error paths map to the documented exit codes") {
    CHECK(run("classify 'x1 +'").exit_code == 2);           // syntax error
    CHECK(run("classify 'x1*x1'").exit_code == 3);          // not multilinear
    CHECK(run("classify 'x1' --n 7").exit_code == 4);       // unsupported size
    CHECK(run("nf 'x1*x2*x3*x4*x5*x6*x7'").exit_code == 4); // above the degree cap
    CHECK(run("witness '[x1,x2][x3,x4]' --n 3 --target '{\"1,2\": \"1\"}'").exit_code == 5);
    CHECK(run("witness '[x1,x2]' --n 3 --target 'not json'").exit_code == 2);
    CHECK(run("classify").exit_code != 0);                  // missing required argument
    CHECK(run("frobnicate 'x1'").exit_code != 0);           // unknown subcommand
}

TEST_CASE("an exhausted witness search reports evidence on stdout") {
    RunResult r = run("witness '[x1,x2]' --n 3 --target '{\"1,3\": \"1\"}' --budget 0");
    REQUIRE(r.exit_code == 6);
    Json j = parse_out(r);
    conforms(j, "witness_exhausted.schema.json");
    CHECK(j.at("evidence").at("span_rank") == 3);
}

TEST_CASE("the degree cap honors its environment override") {
    CHECK(run("classify '[x1,x2][x3,x4]'", "UTIMAGE_DEGREE_CAP=3 ").exit_code == 4);
    CHECK(run("classify '[x1,x2][x3,x4]'", "UTIMAGE_DEGREE_CAP=8 ").exit_code == 0);
    CHECK(run("nf 'x2*x1'", "UTIMAGE_DEGREE_CAP=1 ").exit_code == 4);
    CHECK(run("classify 'x1'", "UTIMAGE_DEGREE_CAP=zap ").exit_code == 4);
}
