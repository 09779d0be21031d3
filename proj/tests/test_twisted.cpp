#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sgp/twisted.hpp"

using namespace sgp;

TEST_CASE("identity operator: no stored components") {
    RationalField qq;
    auto id = make_twisted_operator(qq, 2, {});
    CHECK(certified_compare(dilation(qq, id), Real(1)) == Cmp::equal);
    std::vector<std::vector<Rat>> xs = {{Rat(1), Rat(1)}, {Rat(2), Rat(3)}, {Rat(1, 2), Rat(5)}};
    for (const auto& x : xs) {
        CHECK(certified_compare(twisted_height(qq, id, x), height_H(qq, x)) == Cmp::equal);
        CHECK(twisted_comparison_check(qq, id, x));
    }
}

TEST_CASE("archimedean component over Q") {
    RationalField qq;
    Mat<Rat> m = {{Rat(2), Rat(0)}, {Rat(0), Rat(1)}};
    auto A = make_twisted_operator(qq, 2, {{Place::rational_infinite(), m}});
    CHECK(certified_compare(dilation(qq, A), Real(3)) == Cmp::equal);
    std::vector<Rat> x = {Rat(1), Rat(1)};
    CHECK(certified_compare(twisted_height(qq, A, x), Real(2)) == Cmp::equal);
    CHECK(twisted_comparison_check(qq, A, x));
}

TEST_CASE("p-adic component over Q") {
    RationalField qq;
    Mat<Rat> m = {{Rat(1, 2), Rat(0)}, {Rat(0), Rat(1)}};
    auto A = make_twisted_operator(qq, 2, {{Place::rational_prime(2), m}});
    // |1/2|_2 + |1|_2 = 3
    CHECK(certified_compare(dilation(qq, A), Real(3)) == Cmp::equal);
    std::vector<Rat> x = {Rat(1), Rat(1)};
    // H_A(x) = max(|1/2|_2, 1) = 2 at p=2, untouched elsewhere
    CHECK(certified_compare(twisted_height(qq, A, x), Real(2)) == Cmp::equal);
    CHECK(twisted_comparison_check(qq, A, x));
}

TEST_CASE("function field components stay exact powers of e") {
    FunctionField f(2);
    FqPoly t = FqPoly::t(2);
    Mat<FFElem> m = {{FFElem::from_poly(t), f.zero()}, {f.zero(), f.one()}};
    auto A = make_twisted_operator(f, 2, {{Place::ff_infinite(), m}});
    std::vector<FFElem> x = {f.one(), f.one()};
    Real ha = twisted_height(f, A, x);
    REQUIRE(ha.is_exact_log());
    CHECK(ha.exact_log_value() == 1);  // H_A(x) = e
    CHECK(twisted_comparison_check(f, A, x));

    // single-entry component: the dilation constant is exactly |t|_inf = e
    Mat<FFElem> s = {{FFElem::from_poly(t)}};
    auto B = make_twisted_operator(f, 1, {{Place::ff_infinite(), s}});
    Real c = dilation(f, B);
    REQUIRE(c.is_exact_log());
    CHECK(c.exact_log_value() == 1);
    // equality case of the comparison, resolved through exact logarithms
    std::vector<FFElem> y = {f.one()};
    CHECK(certified_compare(twisted_height(f, B, y), c * height_H(f, y)) == Cmp::equal);
    CHECK(twisted_comparison_check(f, B, y));

    // finite place t: |1/t|_t = e
    Mat<FFElem> mt = {{FFElem(f.one().num, t)}};
    auto C = make_twisted_operator(f, 1, {{Place::ff_finite(t), mt}});
    Real hc = twisted_height(f, C, y);
    REQUIRE(hc.is_exact_log());
    CHECK(hc.exact_log_value() == 1);
}

TEST_CASE("validation errors") {
    RationalField qq;
    Mat<Rat> sing = {{Rat(1), Rat(1)}, {Rat(2), Rat(2)}};
    CHECK_THROWS_AS(make_twisted_operator(qq, 2, {{Place::rational_infinite(), sing}}), std::domain_error);

    Mat<Rat> id2 = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
    CHECK_THROWS_AS(make_twisted_operator(qq, 2,
                                          {{Place::rational_infinite(), id2}, {Place::rational_infinite(), id2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_twisted_operator(qq, 2, {{Place::rational_infinite(), {{Rat(1)}}}}),
                    std::invalid_argument);

    QuadraticField g(-1);
    Mat<Quad> idq = {{g.one(), g.zero()}, {g.zero(), g.one()}};
    Place bad;
    bad.tag = Place::Tag::quad_prime_ideal;
    bad.p = 2;
    CHECK_THROWS_AS(make_twisted_operator(g, 2, {{bad, idq}}), std::invalid_argument);

    auto A = make_twisted_operator(qq, 2, {{Place::rational_infinite(), id2}});
    CHECK_THROWS(twisted_height(qq, A, std::vector<Rat>{Rat(1)}));             // dimension
    CHECK_THROWS(twisted_height(qq, A, std::vector<Rat>{Rat(0), Rat(0)}));     // zero vector
}

TEST_CASE("random operators over Q satisfy the dilation comparison") {
    RationalField qq;
    std::mt19937_64 rng(411);
    std::uniform_int_distribution<long> num(-4, 4), den(1, 3), pick(0, 2), dim(2, 3);
    std::vector<Place> pool = {Place::rational_infinite(), Place::rational_prime(2), Place::rational_prime(3)};
    for (int trial = 0; trial < 100; ++trial) {
        size_t n = static_cast<size_t>(dim(rng));
        std::vector<std::pair<Place, Mat<Rat>>> comps;
        size_t nc = static_cast<size_t>(pick(rng)) + 1;
        for (size_t c = 0; c < nc && c < pool.size(); ++c) {
            Mat<Rat> m;
            do {
                m.assign(n, std::vector<Rat>(n));
                for (auto& row : m)
                    for (auto& e : row) e = Rat(mpq_class(num(rng), den(rng)));
            } while (qq.is_zero(mat_det(qq, m)));
            comps.emplace_back(pool[c], m);
        }
        auto A = make_twisted_operator(qq, n, comps);
        std::vector<Rat> x(n);
        bool nz = false;
        for (auto& e : x) {
            e = Rat(mpq_class(num(rng), den(rng)));
            nz = nz || e != 0;
        }
        if (!nz) x[0] = 1;
        CHECK(twisted_comparison_check(qq, A, x));
    }
}

TEST_CASE("random operators over Q(i) satisfy the dilation comparison") {
    QuadraticField g(-1);
    std::mt19937_64 rng(412);
    std::uniform_int_distribution<long> coef(-2, 2);
    Place arch = Place::quad_archimedean(1, 2);
    for (int trial = 0; trial < 100; ++trial) {
        size_t n = 2;
        Mat<Quad> m;
        do {
            m.assign(n, std::vector<Quad>(n, g.zero()));
            for (auto& row : m)
                for (auto& e : row) e = g.from_parts(Rat(coef(rng)), Rat(coef(rng)));
        } while (g.is_zero(mat_det(g, m)));
        auto A = make_twisted_operator(g, n, {{arch, m}});
        std::vector<Quad> x(n, g.zero());
        bool nz = false;
        for (auto& e : x) {
            e = g.from_parts(Rat(coef(rng)), Rat(coef(rng)));
            nz = nz || !e.is_zero();
        }
        if (!nz) x[0] = g.one();
        CHECK(twisted_comparison_check(g, A, x));
    }
}
