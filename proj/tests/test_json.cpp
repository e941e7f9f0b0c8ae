#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "schema_check.hpp"
#include "utimage/json_io.hpp"

using namespace utimage;

namespace {
const std::string kSchemaDir = UTIMAGE_SCHEMA_DIR;

void conforms(const Json& j, const std::string& schema) {
    try {
        schemacheck::validate(j, kSchemaDir, schema);
    } catch (const std::exception& e) {
        FAIL("schema violation: " << e.what() << "\n" << j.dump(2));
    }
}
}  // namespace

TEST_CASE("polynomial serialization round-trips") {
    MultilinearPoly f = expand("2/3*x1*x2 - x2*x1");
    Json j = json_of(f);
    conforms(j, "poly.schema.json");
    CHECK(j.at("degree") == 2);
    REQUIRE(j.at("terms").size() == 2);
    CHECK(j.at("terms")[0] == Json{{"perm", {1, 2}}, {"coeff", "2/3"}});
    CHECK(j.at("terms")[1] == Json{{"perm", {2, 1}}, {"coeff", "-1"}});
    CHECK(poly_from_json(j) == f);
    CHECK(poly_from_json(json_of(MultilinearPoly::zero(4))) == MultilinearPoly::zero(4));
}

TEST_CASE("polynomial deserialization rejects malformed input") {
    CHECK_THROWS_AS(poly_from_json(Json::array()), SyntaxError);
    CHECK_THROWS_AS(poly_from_json(Json{{"degree", 2}}), SyntaxError);
    CHECK_THROWS_AS(
        poly_from_json(Json{{"degree", 2},
                            {"terms", Json::array({Json{{"perm", {1, 1}}, {"coeff", "1"}}})}}),
        NotMultilinear);
    CHECK_THROWS_AS(
        poly_from_json(Json{{"degree", 3},
                            {"terms", Json::array({Json{{"perm", {1, 2}}, {"coeff", "1"}}})}}),
        NotMultilinear);
    CHECK_THROWS_AS(
        poly_from_json(Json{{"degree", 2},
                            {"terms", Json::array({Json{{"perm", {1, 2}}, {"coeff", "1.5"}}})}}),
        SyntaxError);
}

TEST_CASE("matrix serialization keeps only nonzero upper entries") {
    UTMatrix<Rat> m(3);
    m.at(1, 2) = Rat(-7) / 2;
    m.at(2, 2) = Rat(4);
    Json j = json_of(m);
    conforms(j, "matrix.schema.json");
    CHECK(j.at("n") == 3);
    CHECK(j.at("entries") == Json{{"1,2", "-7/2"}, {"2,2", "4"}});

    CHECK(matrix_from_json(j, 3) == m);
    CHECK(matrix_from_json(j.at("entries"), 3) == m);  // bare sparse map form
    CHECK(matrix_from_json(Json::object(), 2) == UTMatrix<Rat>(2));
}

TEST_CASE("matrix deserialization rejects malformed input") {
    CHECK_THROWS_AS(matrix_from_json(Json{{"n", 2}, {"entries", Json::object()}}, 3),
                    SizeMismatch);
    CHECK_THROWS_AS(matrix_from_json(Json{{"2,1", "1"}}, 3), SizeMismatch);   // lower triangle
    CHECK_THROWS_AS(matrix_from_json(Json{{"1,4", "1"}}, 3), SizeMismatch);   // out of range
    CHECK_THROWS_AS(matrix_from_json(Json{{"1;2", "1"}}, 3), SyntaxError);
    CHECK_THROWS_AS(matrix_from_json(Json{{"1,2", "x"}}, 3), SyntaxError);
    CHECK_THROWS_AS(matrix_from_json(Json::array(), 3), SyntaxError);
}

TEST_CASE("classification JSON carries the verdict and its evidence") {
    Json j = json_of(classify(expand("[x1,x2]"), 3));
    conforms(j, "classify.schema.json");
    CHECK(j.at("algebra") == "UT3");
    CHECK(j.at("verdict") == "J");
    CHECK(j.at("identity_level") == 1);
    CHECK(j.at("sum_of_coefficients") == "0");
    CHECK(j.at("conjectural") == false);
    CHECK(j.at("evidence").at("criterion") == "identity_chain");
    CHECK(j.at("evidence").at("nonvanishing").at("position") == "1,2");
    CHECK(j.at("evidence").at("nonvanishing").at("size") == 2);

    Json full = json_of(classify(expand("x1*x2"), 2));
    conforms(full, "classify.schema.json");
    CHECK(full.at("verdict") == "UT2");
    CHECK(full.at("evidence").at("criterion") == "sum_of_coefficients");
    CHECK_FALSE(full.at("evidence").contains("nonvanishing"));

    Json pred = json_of(conjecture_predict(expand("[x1,x2][x3,x4]"), 4, 11, 10));
    conforms(pred, "classify.schema.json");
    CHECK(pred.at("verdict") == "J^2");
    CHECK(pred.at("conjectural") == true);
    CHECK(pred.at("evidence").at("sampling").at("count") == 10);
}

TEST_CASE("normal form JSON lists basis coordinates") {
    Json j = json_of(normal_form(expand("x2*x1"), 3));
    conforms(j, "nf.schema.json");
    CHECK(j.at("rendered") == "x1*x2 + [x2,x1]");
    REQUIRE(j.at("terms").size() == 2);
    CHECK(j.at("terms")[0].at("prefix") == Json::array({1, 2}));
    CHECK(j.at("terms")[0].at("commutators") == Json::array());
    CHECK(j.at("terms")[0].at("coeff") == "1");
    CHECK(j.at("terms")[1].at("commutators") == Json::array({Json::array({2, 1})}));
}

TEST_CASE("witness JSON is verified and schema-conforming") {
    UTMatrix<Rat> t(3);
    t.at(1, 3) = Rat(5);
    WitnessBundle w = witness_for_target(expand("[x1,x2][x3,x4]"), 3, t);
    Json j = json_of(w);
    j["seed"] = 2024;  // the CLI records the search seed alongside the bundle
    conforms(j, "witness.schema.json");
    CHECK(j.at("verified") == true);
    CHECK(j.at("target").at("entries") == Json{{"1,3", "5"}});
    CHECK(j.at("assignment").size() == 4);
}

TEST_CASE("sample report JSON") {
    Json j = json_of(sample_image(expand("[x1,x2]"), 2, 6, 19));
    conforms(j, "sample.schema.json");
    CHECK(j.at("count") == 6);
    CHECK(j.at("seed") == 19);
    CHECK(j.at("values").size() == 6);
    CHECK(j.at("span_rank") == 1);
    conforms(Json{{"error", "witness_search_exhausted"}, {"evidence", j}},
             "witness_exhausted.schema.json");
}

TEST_CASE("corpus report JSON") {
    CorpusOptions opt;
    opt.count = 6;
    opt.seed = 4;
    Json j = json_of(run_corpus(opt));
    conforms(j, "corpus.schema.json");
    CHECK(j.at("failures") == 0);
    CHECK(j.at("entries").size() == 6);
    CHECK(j.at("options").at("seed") == 4);
    const Json& counts = j.at("verdict_counts");
    REQUIRE(counts.size() == 4);
    int total = 0;
    for (const auto& [name, c] : counts.items()) total += c.get<int>();
    CHECK(total == 6);
    CHECK(counts.contains("UT3"));
    CHECK(counts.contains("J"));
    CHECK(counts.contains("J^2"));
    CHECK(counts.contains("0"));
}

TEST_CASE("JSON dumps are deterministic") {
    auto render = [] {
        Json j = json_of(classify(expand("[x1,x2][x3,x4]"), 3));
        return j.dump(2);
    };
    CHECK(render() == render());
    // object keys come out sorted, so field insertion order cannot leak
    Json j = json_of(sample_image(expand("x1"), 3, 2, 1));
    std::string dump = j.dump();
    CHECK(dump.find("\"algebra_size\"") < dump.find("\"bound\""));
    CHECK(dump.find("\"bound\"") < dump.find("\"count\""));
}
