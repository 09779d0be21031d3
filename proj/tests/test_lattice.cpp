#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sgp/intlattice.hpp"

using namespace sgp;

TEST_CASE("hermite normal form") {
    IntMat h = hnf_rows({{mpz_class(2), mpz_class(4)}, {mpz_class(1), mpz_class(1)}});
    REQUIRE(h.size() == 2);
    CHECK(h[0] == IntVec{1, 1});
    CHECK(h[1] == IntVec{0, 2});

    h = hnf_rows({{mpz_class(0), mpz_class(0)}, {mpz_class(-3), mpz_class(0)}});
    REQUIRE(h.size() == 1);
    CHECK(h[0] == IntVec{3, 0});
}

TEST_CASE("integer kernel and saturation") {
    IntMat ker = integer_kernel({{mpz_class(1), mpz_class(1), mpz_class(1)}});
    REQUIRE(ker.size() == 2);
    for (const auto& row : ker) CHECK(row[0] + row[1] + row[2] == 0);

    // kernel of (2, 4): saturated generator (2, -1), not (4, -2)
    ker = integer_kernel({{mpz_class(2), mpz_class(4)}});
    REQUIRE(ker.size() == 1);
    CHECK(ker[0][0] * 2 + ker[0][1] * 4 == 0);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), ker[0][0].get_mpz_t(), ker[0][1].get_mpz_t());
    CHECK(g == 1);

    IntMat sat = saturate_rows({{mpz_class(2), mpz_class(2)}});
    REQUIRE(sat.size() == 1);
    CHECK(sat[0] == IntVec{1, 1});

    sat = saturate_rows({{mpz_class(1), mpz_class(0)}, {mpz_class(0), mpz_class(1)}});
    REQUIRE(sat.size() == 2);
}

TEST_CASE("maximal minors") {
    IntMat b{{mpz_class(1), mpz_class(-1), mpz_class(0)}, {mpz_class(0), mpz_class(1), mpz_class(-1)}};
    auto m = maximal_minors(b);
    REQUIRE(m.size() == 3);
    CHECK(m[0] == 1);
    CHECK(m[1] == -1);
    CHECK(m[2] == 1);
}

TEST_CASE("sup-norm enumeration") {
    IntMat z2{{mpz_class(1), mpz_class(0)}, {mpz_class(0), mpz_class(1)}};
    CHECK(enumerate_supnorm(z2, mpq_class(1)).size() == 9);

    IntMat zerosum{{mpz_class(1), mpz_class(-1), mpz_class(0)}, {mpz_class(0), mpz_class(1), mpz_class(-1)}};
    auto pts = enumerate_supnorm(zerosum, mpq_class(2));
    CHECK(pts.size() == 19);
    for (const auto& v : pts) {
        CHECK(v[0] + v[1] + v[2] == 0);
        for (const auto& c : v) CHECK(abs(c) <= 2);
    }

    CHECK_THROWS_AS(enumerate_supnorm(z2, mpq_class(1000), 100), std::runtime_error);
}

TEST_CASE("cube count, full rank") {
    std::vector<std::vector<mpq_class>> id{{mpq_class(1), mpq_class(0)}, {mpq_class(0), mpq_class(1)}};
    auto r = cube_count_fullrank(id, 1, 1, {mpq_class(0), mpq_class(0)});
    CHECK(r.exact == 9);
    CHECK(r.lower.exact_value() == 1);
    CHECK(r.upper.exact_value() == 9);
    CHECK(r.bounds_hold);

    std::vector<std::vector<mpq_class>> d21{{mpq_class(2), mpq_class(0)}, {mpq_class(0), mpq_class(1)}};
    r = cube_count_fullrank(d21, 1, 2, {mpq_class(0), mpq_class(0)});
    CHECK(r.exact == 15);
    CHECK(r.lower.exact_value() == 3);
    CHECK(r.upper.exact_value() == 15);
    CHECK(r.bounds_hold);

    r = cube_count_fullrank(id, 1, 1, {mpq_class(1, 2), mpq_class(0)});
    CHECK(r.exact == 6);
    CHECK(r.bounds_hold);

    CHECK_THROWS(cube_count_fullrank(d21, 3, 2, {mpq_class(0), mpq_class(0)}));  // diagonal below c
    CHECK_THROWS(cube_count_fullrank(d21, 1, mpq_class(1, 4), {mpq_class(0), mpq_class(0)}));  // radius below threshold
}

TEST_CASE("cube count, sublattice") {
    IntMat zs2{{mpz_class(1), mpz_class(-1)}};
    auto r = cube_count_sublattice(zs2, 3);
    CHECK(r.exact == 7);
    CHECK(r.delta == 1);
    REQUIRE(r.lower_applies);
    CHECK(r.lower == 6);
    CHECK(r.upper == 7);
    CHECK(r.bounds_hold);

    r = cube_count_sublattice(zs2, 1);
    CHECK(r.exact == 3);
    REQUIRE(r.lower_applies);
    CHECK(r.lower == 2);
    CHECK(r.upper == 3);
    CHECK(r.bounds_hold);

    IntMat zs3{{mpz_class(1), mpz_class(-1), mpz_class(0)}, {mpz_class(0), mpz_class(1), mpz_class(-1)}};
    r = cube_count_sublattice(zs3, 2);
    CHECK(r.exact == 19);
    CHECK(r.delta == 1);
    REQUIRE(r.lower_applies);
    CHECK(r.lower == 4);
    CHECK(r.upper == 25);
    CHECK(r.bounds_hold);

    // non-multiple radius: only the upper bound is claimed
    r = cube_count_sublattice(zs2, mpq_class(5, 2));
    CHECK_FALSE(r.lower_applies);
    CHECK(r.bounds_hold);
}

TEST_CASE("random full-rank lattices satisfy the bounds") {
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<long> diag(1, 4), off(-3, 3), shift(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        size_t n = 2 + trial % 2;
        std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n, 0));
        mpq_class det = 1;
        for (size_t i = 0; i < n; ++i) {
            a[i][i] = diag(rng);
            det *= a[i][i];
            for (size_t j = i + 1; j < n; ++j) a[i][j] = off(rng);
        }
        std::vector<mpq_class> z(n);
        for (auto& c : z) c = mpq_class(shift(rng), 2);
        // 2R >= max(det / c^(n-1), c) with c = 1
        mpq_class radius = det;
        auto r = cube_count_fullrank(a, 1, radius, z);
        CHECK(r.bounds_hold);
    }
}

TEST_CASE("random sublattices satisfy the bounds") {
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<long> coef(-2, 2), mult(1, 2);
    int done = 0;
    while (done < 50) {
        size_t n = 3 + done % 2;
        size_t k = 1 + done % 2;
        IntMat b(k, IntVec(n));
        for (auto& row : b)
            for (auto& e : row) e = coef(rng);
        mpz_class delta = 0;
        for (const auto& m : maximal_minors(b)) delta = std::max(delta, mpz_class(abs(m)));
        if (delta == 0 || delta > 4) continue;
        mpq_class radius = mpq_class(static_cast<long>(k)) * mpq_class(delta) * mult(rng);
        auto r = cube_count_sublattice(b, radius);
        CHECK(r.lower_applies);
        CHECK(r.bounds_hold);
        ++done;
    }
}
