#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "utimage/linalg.hpp"
#include "utimage/rng.hpp"
#include "utimage/utmatrix.hpp"

using namespace utimage;

namespace {
MatQ ad_as_matq(const AdOperator& op) {
    MatQ m(op.matrix.size(), op.matrix.size());
    for (std::size_t r = 0; r < op.matrix.size(); ++r)
        for (std::size_t c = 0; c < op.matrix.size(); ++c) m.at(r, c) = op.matrix[r][c];
    return m;
}
}  // namespace

TEST_CASE("matrix storage and factories") {
    auto e = UTMatrix<Rat>::identity(3);
    CHECK(e.at(1, 1) == 1);
    CHECK(e.at(1, 2) == 0);
    CHECK(e.size() == 3);
    auto u = UTMatrix<Rat>::unit(3, 1, 3);
    CHECK(u.at(1, 3) == 1);
    CHECK_FALSE(u.is_zero());
    CHECK(UTMatrix<Rat>(4).is_zero());
    auto d = UTMatrix<Rat>::diagonal(std::vector<Rat>{Rat(1), Rat(2)});
    CHECK(d.size() == 2);
    CHECK(d.at(2, 2) == 2);
}

TEST_CASE("multiplication agrees with unit matrix calculus") {
    // E_ij E_kl = [j == k] E_il, restricted to the upper triangle
    for (int i = 1; i <= 3; ++i)
        for (int j = i; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k)
                for (int l = k; l <= 3; ++l) {
                    auto prod = mat_mul(UTMatrix<Rat>::unit(3, i, j), UTMatrix<Rat>::unit(3, k, l));
                    if (j == k && i <= l)
                        CHECK(prod == UTMatrix<Rat>::unit(3, i, l));
                    else
                        CHECK(prod.is_zero());
                }
}

TEST_CASE("multiplication is associative and identity-neutral") {
    Rng rng(5);
    for (int it = 0; it < 25; ++it) {
        int n = 2 + static_cast<int>(rng.index(3));
        auto a = random_ut_matrix(n, rng, 6);
        auto b = random_ut_matrix(n, rng, 6);
        auto c = random_ut_matrix(n, rng, 6);
        CHECK(mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c)));
        CHECK(mat_mul(a, UTMatrix<Rat>::identity(n)) == a);
        CHECK(mat_mul(UTMatrix<Rat>::identity(n), a) == a);
        CHECK(commutator(a, b) == (commutator(b, a).scaled(Rat(-1))));
    }
}

TEST_CASE("radical level counts surviving superdiagonals") {
    CHECK(radical_level(UTMatrix<Rat>::identity(3)) == 0);
    CHECK(radical_level(UTMatrix<Rat>(3)) == 3);
    CHECK(radical_level(UTMatrix<Rat>::unit(3, 1, 2)) == 1);
    CHECK(radical_level(UTMatrix<Rat>::unit(3, 1, 3)) == 2);
    CHECK(radical_level(UTMatrix<Rat>::unit(4, 2, 4)) == 2);
}

TEST_CASE("radical levels are superadditive under multiplication") {
    Rng rng(6);
    for (int it = 0; it < 40; ++it) {
        int n = 2 + static_cast<int>(rng.index(4));
        auto a = random_ut_matrix(n, rng, 4);
        auto b = random_ut_matrix(n, rng, 4);
        int la = radical_level(a), lb = radical_level(b);
        CHECK(radical_level(mat_mul(a, b)) >= std::min(n, la + lb));
    }
}

TEST_CASE("commutators against strict upper parts raise the level") {
    // [J^k, J] sits inside J^{k+1}
    Rng rng(7);
    for (int it = 0; it < 30; ++it) {
        int n = 3 + static_cast<int>(rng.index(2));
        auto a = random_ut_matrix(n, rng, 4);
        auto b = random_ut_matrix(n, rng, 4);
        for (int i = 1; i <= n; ++i) {
            a.at(i, i) = 0;
            b.at(i, i) = 0;
        }
        CHECK(radical_level(commutator(a, b)) >= std::min(n, 2));
    }
}

TEST_CASE("adjoint of a distinct diagonal is diagonal with difference eigenvalues") {
    AdOperator op = ad_diag({Rat(0), Rat(1), Rat(2)}, 1);
    REQUIRE(op.basis == std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}});
    CHECK(op.matrix[0][0] == 1);
    CHECK(op.matrix[1][1] == 2);
    CHECK(op.matrix[2][2] == 1);
    CHECK(op.matrix[0][1] == 0);

    AdOperator top = ad_diag({Rat(0), Rat(1), Rat(2)}, 2);
    REQUIRE(top.basis == std::vector<std::pair<int, int>>{{1, 3}});
    CHECK(top.matrix[0][0] == 2);
}

TEST_CASE("adjoint ranks match the two bracket identities") {
    // [J^k, D] = J^k for every k >= 1, while [UT_n, D] only reaches J.
    Rng rng(8);
    for (int n = 2; n <= 5; ++n) {
        std::vector<Rat> d;
        for (int i = 0; i < n; ++i) d.emplace_back(10 * i + static_cast<int>(rng.index(9)));
        for (int k = 1; k < n; ++k) {
            AdOperator op = ad_diag(d, k);
            CHECK(rank(ad_as_matq(op)) == static_cast<int>(op.basis.size()));
        }
        AdOperator full = ad_diag(d, 0);
        CHECK(rank(ad_as_matq(full)) == n * (n - 1) / 2);
    }
}

TEST_CASE("repeated diagonal entries lose rank") {
    AdOperator op = ad_diag({Rat(1), Rat(1), Rat(2)}, 1);
    CHECK(rank(ad_as_matq(op)) == 2);  // E_12 is killed
}

TEST_CASE("size mismatches are rejected") {
    UTMatrix<Rat> a(2), b(3);
    CHECK_THROWS_AS(a + b, SizeMismatch);
    CHECK_THROWS_AS(mat_mul(a, b), SizeMismatch);
}
