#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sgp/heights.hpp"

using namespace sgp;

static bool req_equal(const Real& a, const Real& b) { return certified_compare(a, b) == Cmp::equal; }

static Rat rat(long n, long d) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

TEST_CASE("local absolute values") {
    RationalField qq;
    Real v = abs_value(qq, Rat(3, 2), Place::rational_prime(2));
    CHECK(v.exact_value() == 2);
    CHECK(abs_value(qq, Rat(3, 2), Place::rational_infinite()).exact_value() == mpq_class(3, 2));

    FunctionField f2(2);
    FFElem t = FFElem::from_poly(FqPoly::t(2));
    Real vt = abs_value(f2, t, Place::ff_infinite());
    REQUIRE(vt.is_exact_log());
    CHECK(vt.exact_log_value() == 1);
    Real vtf = abs_value(f2, t, Place::ff_finite(FqPoly::t(2)));
    CHECK(vtf.exact_log_value() == -1);

    QuadraticField gauss(-1);
    Real m = abs_value(gauss, gauss.from_parts(Rat(1), Rat(1)), Place::quad_archimedean(1, 2));
    CHECK(certified_compare(m * m, Real(2)) == Cmp::equal);  // |1+i| = sqrt 2
    CHECK_THROWS(abs_value(gauss, gauss.one(), Place::rational_prime(3)));
}

TEST_CASE("product formula worked examples") {
    RationalField qq;
    CHECK(product_formula_check(qq, Rat(6)).ok);
    CHECK(product_formula_check(qq, Rat(1)).ok);
    FunctionField f2(2);
    FFElem t = FFElem::from_poly(FqPoly::t(2));
    CHECK(product_formula_check(f2, t / (t + f2.one())).ok);
    QuadraticField gauss(-1);
    CHECK(product_formula_check(gauss, gauss.from_parts(Rat(1), Rat(1))).ok);
}

TEST_CASE("product formula on random scalars") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long> coef(-30, 30);
    RationalField qq;
    for (int i = 0; i < 200; ++i) {
        long n = coef(rng), d = coef(rng);
        if (n == 0 || d == 0) continue;
        CHECK(product_formula_check(qq, rat(n, d)).ok);
    }
    for (long dd : {-1L, 2L, -3L, 5L}) {
        QuadraticField f(dd);
        for (int i = 0; i < 100; ++i) {
            Quad a = f.from_parts(rat(coef(rng), 7), rat(coef(rng), 5));
            if (a.is_zero()) continue;
            CHECK(product_formula_check(f, a).ok);
        }
    }
    for (unsigned q : {2u, 3u}) {
        FunctionField f(q);
        std::uniform_int_distribution<unsigned> c(0, q - 1);
        for (int i = 0; i < 60; ++i) {
            FqPoly num(q, {c(rng), c(rng), c(rng), 1});
            FqPoly den(q, {c(rng), c(rng), 1});
            FFElem a(num, den);
            if (a.is_zero()) continue;
            CHECK(product_formula_check(f, a).ok);
        }
    }
}

TEST_CASE("heights over Q") {
    RationalField qq;
    std::vector<Rat> x{Rat(3), Rat(4)};
    CHECK(height_H(qq, x).exact_value() == 4);
    CHECK(height_h(qq, x).exact_value() == 4);
    CHECK(height_euclidean(qq, x).exact_value() == 5);
    CHECK(finite_part(qq, x) == 1);
    CHECK(finite_part(qq, {Rat(2), Rat(2)}) == mpq_class(1, 2));
}

TEST_CASE("heights over function fields") {
    FunctionField f2(2);
    FFElem t = FFElem::from_poly(FqPoly::t(2));
    std::vector<FFElem> v{t * t + f2.one()};
    Real h = height_h(f2, v);
    REQUIRE(h.is_exact_log());
    CHECK(h.exact_log_value() == 2);
    CHECK(height_H(f2, v).exact_log_value() == 0);  // single coordinate: product formula
    CHECK(req_equal(height_H(f2, v), height_euclidean(f2, v)));
}

TEST_CASE("weil heights") {
    RationalField qq;
    CHECK(weil_height(qq, Rat(3, 2)).exact_value() == 3);
    CHECK(weil_height(qq, Rat(0)).exact_value() == 1);
    QuadraticField gauss(-1);
    Real w = weil_height(gauss, gauss.from_parts(Rat(1), Rat(1)));
    CHECK(certified_compare(w * w, Real(2)) == Cmp::equal);  // h(1+i) = 2^{1/2}
}

TEST_CASE("quadratic finite part via module index") {
    QuadraticField gauss(-1);
    std::vector<Quad> x{gauss.from_parts(Rat(1), Rat(1)), gauss.from_parts(Rat(2), Rat(0))};
    CHECK(finite_part(gauss, x) == mpq_class(1, 2));  // ideal (1+i), norm 2
}

TEST_CASE("sum height bound") {
    RationalField qq;
    CHECK(sum_height_bound_check(qq, {Rat(1), Rat(1)}, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}));
    CHECK(sum_height_bound_check(qq, {Rat(2), Rat(3)}, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}));
    FunctionField f2(2);
    FFElem t = FFElem::from_poly(FqPoly::t(2));
    CHECK(sum_height_bound_check(f2, {t, f2.one()},
                                 {{f2.one(), f2.zero()}, {f2.zero(), f2.one()}}));
}

TEST_CASE("height invariants on random vectors") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> coef(-9, 9);
    RationalField qq;
    for (int i = 0; i < 100; ++i) {
        std::vector<Rat> x;
        for (int j = 0; j < 4; ++j) x.push_back(rat(coef(rng), 1 + std::abs(coef(rng))));
        bool zero = true;
        for (auto& c : x) zero = zero && c == 0;
        if (zero) continue;
        Real H = height_H(qq, x), E = height_euclidean(qq, x), h = height_h(qq, x);
        CHECK(certified_leq(H, E));
        CHECK(certified_leq(E, Real(2) * H));  // sqrt(N) = 2
        CHECK(certified_leq(Real(1), H));
        CHECK(certified_leq(H, h));
        // homogeneity
        long a = coef(rng);
        if (a != 0) {
            std::vector<Rat> ax;
            for (auto& c : x) ax.push_back(Rat(a) * c);
            CHECK(req_equal(height_H(qq, ax), H));
            CHECK(req_equal(height_euclidean(qq, ax), E));
        }
    }
}

TEST_CASE("absoluteness: rational vectors across fields") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> coef(-9, 9);
    RationalField qq;
    QuadraticField gauss(-1), root2(2);
    for (int i = 0; i < 40; ++i) {
        std::vector<Rat> x;
        for (int j = 0; j < 3; ++j) x.push_back(rat(coef(rng), 1 + std::abs(coef(rng))));
        bool zero = true;
        for (auto& c : x) zero = zero && c == 0;
        if (zero) continue;
        Real hq = height_H(qq, x);
        std::vector<Quad> xg, xr;
        for (auto& c : x) {
            xg.push_back(gauss.from_parts(c, Rat(0)));
            xr.push_back(root2.from_parts(c, Rat(0)));
        }
        CHECK(req_equal(height_H(gauss, xg), hq));
        CHECK(req_equal(height_H(root2, xr), hq));
    }
}

TEST_CASE("quadratic homogeneity with irrational scalars") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<long> coef(-5, 5);
    for (long dd : {-1L, 2L}) {
        QuadraticField f(dd);
        int done = 0;
        while (done < 30) {
            Quad a = f.from_parts(Rat(coef(rng)), Rat(coef(rng)));
            if (a.is_zero()) continue;
            std::vector<Quad> x{f.from_parts(Rat(coef(rng)), Rat(coef(rng))),
                                f.from_parts(Rat(coef(rng)), Rat(coef(rng)))};
            if (x[0].is_zero() && x[1].is_zero()) continue;
            std::vector<Quad> ax{a * x[0], a * x[1]};
            CHECK(req_equal(height_H(f, ax), height_H(f, x)));
            CHECK(req_equal(height_euclidean(f, ax), height_euclidean(f, x)));
            ++done;
        }
    }
}
