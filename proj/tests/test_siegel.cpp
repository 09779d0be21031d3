#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sgp/siegel.hpp"

using namespace sgp;

static Rat rat(long n, long d) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

TEST_CASE("field constants") {
    auto c = constants(FieldDescriptor::rational(), 3, 1);
    CHECK(c.C.exact_value() == 1);
    CHECK(c.E.exact_value() == 1);
    CHECK(c.delta == 1);
    CHECK(c.A.exact_value() == 1);  // omega = 2 > M = 1

    c = constants(FieldDescriptor::rational(), 2, 2);
    // A = (2 sqrt 2)^{1/1}; A^2 = 8
    CHECK(certified_compare(c.A * c.A, Real(8)) == Cmp::equal);

    c = constants(FieldDescriptor::quadratic(-1), 2, 3);
    // C = (8/pi)^{1/2} ~ 1.5958
    CHECK(certified_compare(c.C, Real(rat(159, 100))) == Cmp::greater);
    CHECK(certified_compare(c.C, Real(rat(160, 100))) == Cmp::less);
    // omega = 4 > M = 3: third branch
    CHECK(c.A.exact_value() == 1);
    // M = 4 reaches the first branch: A = (4 * sqrt(4))^{1/2} = 8^{1/2}
    c = constants(FieldDescriptor::quadratic(-1), 2, 4);
    CHECK(certified_compare(c.A * c.A, Real(8)) == Cmp::equal);

    c = constants(FieldDescriptor::function(3), 1, 5);
    CHECK(c.delta == 0);
    CHECK(c.C.exact_value() == 1);
    CHECK(c.E.exact_value() == 1);
    CHECK(c.R.exact_value() == 9);  // (3/2) * 8^{1/3} + 6
    REQUIRE(c.A.is_exact_log());
    CHECK(c.A.exact_log_value() == 9);

    // q = 3 > M = 2: third branch
    c = constants(FieldDescriptor::function(3), 1, 2);
    CHECK(c.A.exact_value() == 1);

    CHECK_THROWS(constants(FieldDescriptor::rational(), 0, 1));
}

TEST_CASE("A is monotone in M") {
    for (long M = 1; M < 8; ++M) {
        Real a1 = constants(FieldDescriptor::quadratic(-1), 2, M).A;
        Real a2 = constants(FieldDescriptor::quadratic(-1), 2, M + 1).A;
        CHECK(certified_leq(a1, a2));
        Real b1 = constants(FieldDescriptor::function(2), 2, M).A;
        Real b2 = constants(FieldDescriptor::function(2), 2, M + 1).A;
        CHECK(certified_leq(b1, b2));
    }
}

TEST_CASE("main bound") {
    Real b = main_bound(FieldDescriptor::rational(), 2, 2, Real(1));
    CHECK(certified_compare(b * b, Real(32)) == Cmp::equal);  // 4 sqrt 2

    b = main_bound(FieldDescriptor::rational(), 2, 1, Real(1));
    CHECK(b.exact_value() == 2);

    b = main_bound(FieldDescriptor::function(3), 2, 5, Real(1));
    REQUIRE(b.is_exact_log());
    CHECK(b.exact_log_value() == 9);
}

TEST_CASE("siegel basis over Q, worked cases") {
    RationalField qq;
    SubspaceBasis<RationalField> full(qq, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
    auto sb = siegel_basis_rational(qq, full);
    REQUIRE(sb.certified);
    CHECK(sb.product_h.exact_value() == 1);

    SubspaceBasis<RationalField> line(qq, {{Rat(1)}, {Rat(-1)}});
    sb = siegel_basis_rational(qq, line);
    REQUIRE(sb.certified);
    CHECK(sb.product_h.exact_value() == 1);  // basis {(1,-1)}, H = 1 <= sqrt 2

    SubspaceBasis<RationalField> plane(qq, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}});
    sb = siegel_basis_rational(qq, plane);
    REQUIRE(sb.certified);
    CHECK(certified_leq(sb.product_h, sqrt(Real(3))));
}

TEST_CASE("siegel basis over Q, random subspaces") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<long> coef(-9, 9);
    RationalField qq;
    int done = 0;
    while (done < 100) {
        size_t n = 2 + done % 4;  // N up to 5
        size_t l = 1 + done % n;
        Mat<Rat> x(n, std::vector<Rat>(l));
        for (auto& row : x)
            for (auto& e : row) e = Rat(coef(rng));
        SubspaceBasis<RationalField> s;
        try {
            s = SubspaceBasis<RationalField>(qq, x);
        } catch (const std::invalid_argument&) {
            continue;
        }
        auto sb = siegel_basis_rational(qq, s);
        REQUIRE(sb.certified);
        // spanning: each returned vector lies in V and they are independent
        Mat<Rat> m(sb.vectors.begin(), sb.vectors.end());
        CHECK(mat_rank(qq, m) == l);
        for (const auto& v : sb.vectors) CHECK(membership(qq, v, s));
        // universal lower bound prod H >= N^{-L/2} HV
        Real prodH(mpq_class(1));
        for (const auto& h : sb.heights_H) prodH = prodH * h;
        mpz_class nl;
        mpz_ui_pow_ui(nl.get_mpz_t(), n, l);
        CHECK(certified_leq(subspace_height(qq, s) * nth_root(Real(mpq_class(mpz_class(1), nl)), 2), prodH));
        ++done;
    }
}

TEST_CASE("siegel basis over F_q(t), worked cases") {
    FunctionField f2(2);
    FFElem t = FFElem::from_poly(FqPoly::t(2));
    SubspaceBasis<FunctionField> full(f2, {{f2.one(), f2.zero()}, {f2.zero(), f2.one()}});
    auto sb = siegel_basis_function_field(f2, full);
    REQUIRE(sb.certified);
    CHECK(sb.product_h.exact_log_value() == 0);

    SubspaceBasis<FunctionField> line(f2, {{t}, {t + f2.one()}});
    sb = siegel_basis_function_field(f2, line);
    REQUIRE(sb.certified);
    CHECK(sb.product_h.exact_log_value() == 1);  // h = e^1 = HV

    // the two columns span K^2, so HV = 1 and reduction must reach a
    // unimodular basis with product 1
    SubspaceBasis<FunctionField> spanning(f2, {{t * t, f2.zero()}, {f2.one(), t}});
    sb = siegel_basis_function_field(f2, spanning);
    REQUIRE(sb.certified);
    CHECK(sb.product_h.exact_log_value() == 0);
}

TEST_CASE("siegel basis over F_q(t), random subspaces") {
    std::mt19937_64 rng(67);
    for (unsigned q : {2u, 3u, 5u}) {
        FunctionField f(q);
        std::uniform_int_distribution<unsigned> fc(0, q - 1);
        int done = 0;
        while (done < 34) {
            size_t n = 2 + done % 3;
            size_t l = 1 + done % n;
            Mat<FFElem> x(n, std::vector<FFElem>(l));
            for (auto& row : x)
                for (auto& e : row) e = FFElem::from_poly(FqPoly(q, {fc(rng), fc(rng), fc(rng)}));
            SubspaceBasis<FunctionField> s;
            try {
                s = SubspaceBasis<FunctionField>(f, x);
            } catch (const std::invalid_argument&) {
                continue;
            }
            auto sb = siegel_basis_function_field(f, s);
            REQUIRE(sb.certified);
            Mat<FFElem> m(sb.vectors.begin(), sb.vectors.end());
            CHECK(mat_rank(f, m) == l);
            for (const auto& v : sb.vectors) CHECK(membership(f, v, s));
            for (const auto& h : sb.heights_h) {
                // after content normalization h = H exactly
                CHECK(certified_compare(h, sb.heights_H[&h - sb.heights_h.data()]) == Cmp::equal);
            }
            ++done;
        }
    }
}

TEST_CASE("siegel certification over quadratic fields, worked cases") {
    QuadraticField gauss(-1);
    SubspaceBasis<QuadraticField> full(gauss, {{gauss.one(), gauss.zero()}, {gauss.zero(), gauss.one()}});
    auto sb = siegel_certify_quadratic(gauss, full);
    REQUIRE(sb.certified);
    CHECK(certified_leq(sb.product_h, sb.bound));

    // ker(x1 + i x2) = span{(-i, 1)}
    SubspaceBasis<QuadraticField> line(gauss, {{gauss.from_parts(Rat(0), Rat(-1))}, {gauss.one()}});
    sb = siegel_certify_quadratic(gauss, line);
    REQUIRE(sb.certified);
    CHECK(sb.heights_h.size() == 1);
    CHECK(certified_compare(sb.product_h, Real(1)) == Cmp::equal);

    QuadraticField root2(2);
    SubspaceBasis<QuadraticField> ker3(root2, {{root2.one(), root2.zero()},
                                               {root2.from_int(-1), root2.one()},
                                               {root2.zero(), root2.from_int(-1)}});
    sb = siegel_certify_quadratic(root2, ker3);
    REQUIRE(sb.certified);
    // bound = 8^{1/2} * sqrt 3 = sqrt 24
    CHECK(certified_compare(sb.bound * sb.bound, Real(24)) == Cmp::equal);
}

TEST_CASE("siegel certification over quadratic fields, random subspaces") {
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<long> coef(-2, 2);
    for (long d : {-1L, 2L, 5L, -3L}) {
        QuadraticField f(d);
        int done = 0;
        while (done < 8) {
            size_t n = 2 + done % 2;
            size_t l = 1 + done % 2;
            if (l > n) l = n;
            Mat<Quad> x(n, std::vector<Quad>(l));
            for (auto& row : x)
                for (auto& e : row) e = f.from_parts(Rat(coef(rng)), Rat(coef(rng)));
            SubspaceBasis<QuadraticField> s;
            try {
                s = SubspaceBasis<QuadraticField>(f, x);
            } catch (const std::invalid_argument&) {
                continue;
            }
            auto sb = siegel_certify_quadratic(f, s);
            if (sb.budget_exhausted) continue;  // never a disproof
            REQUIRE(sb.certified);
            Mat<Quad> m(sb.vectors.begin(), sb.vectors.end());
            CHECK(mat_rank(f, m) == l);
            for (const auto& v : sb.vectors) CHECK(membership(f, v, s));
            ++done;
        }
    }
}
