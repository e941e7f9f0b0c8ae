#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "utimage/pitest.hpp"
#include "utimage/rng.hpp"

using namespace utimage;

namespace {
MultilinearPoly random_poly(Rng& rng, int degree, int nterms, bool zero_sum) {
    MultilinearPoly p = MultilinearPoly::zero(degree);
    Perm base(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) base[static_cast<std::size_t>(i)] = i + 1;
    for (int t = 0; t < nterms; ++t) {
        Perm w = base;
        rng.shuffle(w);
        p.add_term(w, Rat(rng.nonzero_int(-5, 5)));
    }
    if (zero_sum) {
        Perm w = base;
        rng.shuffle(w);
        p.add_term(w, -sum_of_coefficients(p));
    }
    return p;
}
}  // namespace

TEST_CASE("commutator products are identities exactly up to their length") {
    auto c1 = expand("[x1,x2]");
    auto c2 = expand("[x1,x2][x3,x4]");
    auto c3 = expand("[x1,x2][x3,x4][x5,x6]");

    CHECK(is_identity(c1, 1).identity);
    CHECK_FALSE(is_identity(c1, 2).identity);
    CHECK(is_identity(c2, 2).identity);
    CHECK_FALSE(is_identity(c2, 3).identity);
    CHECK(is_identity(c3, 3).identity);
    CHECK_FALSE(is_identity(c3, 4).identity);
}

TEST_CASE("non-identities come with a nonvanishing certificate") {
    IdentityResult r = is_identity(expand("x1*x2"), 1);
    REQUIRE_FALSE(r.identity);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->row == 1);
    CHECK(r.certificate->col == 1);
    CHECK(r.certificate->value.to_string() == "t1_11*t2_11");

    IdentityResult c = is_identity(expand("[x1,x2]"), 2);
    REQUIRE(c.certificate.has_value());
    CHECK(c.certificate->row == 1);
    CHECK(c.certificate->col == 2);
    CHECK(c.certificate->value.to_string() ==
          "t1_11*t2_12 - t1_12*t2_11 + t1_12*t2_22 - t1_22*t2_12");
}

TEST_CASE("identities carry no certificate") {
    IdentityResult r = is_identity(expand("[x1,x2]"), 1);
    CHECK(r.identity);
    CHECK_FALSE(r.certificate.has_value());
}

TEST_CASE("zero coefficient sum is exactly vanishing on 1x1 matrices") {
    Rng rng(31);
    for (int it = 0; it < 60; ++it) {
        int deg = 2 + static_cast<int>(rng.index(4));
        bool balanced = rng.index(2) == 0;
        MultilinearPoly f = random_poly(rng, deg, 1 + static_cast<int>(rng.index(4)), balanced);
        CHECK(is_identity(f, 1).identity == (sum_of_coefficients(f) == 0));
        // identities of UT_2 in particular have zero coefficient sum
        if (!f.is_zero() && deg <= 4 && is_identity(f, 2).identity)
            CHECK(sum_of_coefficients(f) == 0);
    }
}

TEST_CASE("identity level chain") {
    CHECK(max_identity_level(expand("x1"), 4) == 0);
    CHECK(max_identity_level(expand("x1*x2"), 4) == 0);
    CHECK(max_identity_level(expand("[x1,x2]"), 4) == 1);
    CHECK(max_identity_level(expand("[x1,x2][x3,x4]"), 4) == 2);
    CHECK(max_identity_level(expand("[x1,x2][x3,x4][x5,x6]"), 4) == 3);
    // the chain stops at n_max even if f stays an identity
    CHECK(max_identity_level(expand("[x1,x2][x3,x4]"), 2) == 2);
    CHECK(max_identity_level(MultilinearPoly::zero(2), 3) == 3);

    detail::LevelResult lr = detail::identity_level_with_certificate(expand("[x1,x2]"), 3);
    CHECK(lr.level == 1);
    REQUIRE(lr.breaking_certificate.has_value());  // witnessed on UT_2
    CHECK(lr.breaking_certificate->row == 1);
    CHECK(lr.breaking_certificate->col == 2);
}

TEST_CASE("degree cap guards the symbolic test") {
    MultilinearPoly nine = expand("x1*x2*x3*x4*x5*x6*x7*x8*x9");
    CHECK_THROWS_AS(is_identity(nine, 1), DegreeCapExceeded);
    PitestConfig wide;
    wide.degree_cap = 9;
    CHECK_FALSE(is_identity(nine, 1, wide).identity);
    CHECK_THROWS_AS(is_identity(nine, 0, wide), UnsupportedSize);
    CHECK_THROWS_AS(max_identity_level(nine, 0), UnsupportedSize);
}

TEST_CASE("slot offsets change the tuple but never the verdict") {
    PitestConfig shifted;
    shifted.slot_offset = 40;
    auto f = expand("[x1,x2]");
    CHECK(is_identity(f, 1, shifted).identity);
    CHECK_FALSE(is_identity(f, 2, shifted).identity);
    IdentityResult a = is_identity(f, 2);
    IdentityResult b = is_identity(f, 2, shifted);
    CHECK(a.certificate->value.to_string() != b.certificate->value.to_string());
}

TEST_CASE("randomized testing agrees with the symbolic answer") {
    CHECK(is_identity_randomized(expand("[x1,x2]"), 1, 20, 7));
    CHECK_FALSE(is_identity_randomized(expand("[x1,x2]"), 2, 20, 7));
    CHECK(is_identity_randomized(expand("[x1,x2][x3,x4]"), 2, 20, 7));
    CHECK_FALSE(is_identity_randomized(expand("x1*x2"), 1, 20, 7, 3));
}
