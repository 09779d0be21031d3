#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sgp/avoid.hpp"

using namespace sgp;

namespace {

// X_i X_j style monomial builder
template <typename F>
MultivariatePolynomial<F> mono(const F& f, size_t n, std::vector<unsigned> exps) {
    return poly_from_terms(f, n, {{std::move(exps), f.one()}});
}

}  // namespace

TEST_CASE("polynomial arithmetic and normalization") {
    RationalField qq;
    auto x1 = poly_variable(qq, 2, 0), x2 = poly_variable(qq, 2, 1);
    auto p = poly_mul(qq, x1, x2);
    CHECK(p.degree() == 2);
    CHECK(p.var_degree(0) == 1);
    CHECK(poly_evaluate(qq, p, {Rat(1), Rat(1)}) == 1);
    CHECK(poly_evaluate(qq, p, {Rat(3), Rat(-2)}) == -6);

    // cancellation normalizes to zero
    auto z = poly_sub(qq, p, p);
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);

    // duplicate exponent vectors are merged
    auto m = poly_from_terms(qq, 2, {{{1, 0}, Rat(2)}, {{1, 0}, Rat(3)}});
    CHECK(m.terms.size() == 1);
    CHECK(m.terms[0].second == 5);

    FunctionField f2(2);
    auto d = poly_sub(f2, poly_variable(f2, 2, 0), poly_variable(f2, 2, 1));
    FqPoly t = FqPoly::t(2);
    auto val = poly_evaluate(f2, d, {FFElem::from_poly(t), FFElem::from_poly(FqPoly(2, {1, 1}))});
    CHECK(val == f2.one());  // t - (t+1) = 1 in characteristic 2
}

TEST_CASE("symbolic restriction matches evaluation") {
    RationalField qq;
    auto p = poly_mul(qq, poly_variable(qq, 2, 0), poly_variable(qq, 2, 1));
    Mat<Rat> X = {{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}};  // columns (1,1), (1,-1)
    auto pv = restrict_symbolic(qq, p, X);
    // P_V(Y1,Y2) = (Y1+Y2)(Y1-Y2) = Y1^2 - Y2^2
    CHECK(pv.terms.size() == 2);
    CHECK(poly_evaluate(qq, pv, {Rat(1), Rat(1)}) == 0);  // P((2,0)) = 0
    // agreement with composition-by-evaluation on a grid
    SubspaceBasis<RationalField> s(qq, X);
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b) {
            std::vector<Rat> xi{Rat(a), Rat(b)};
            std::vector<Rat> x{xi[0] + xi[1], xi[0] - xi[1]};
            CHECK(poly_evaluate(qq, pv, xi) == poly_evaluate(qq, p, x));
        }
}

TEST_CASE("identically-zero test on a subspace") {
    RationalField qq;
    Mat<Rat> full = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
    SubspaceBasis<RationalField> v2(qq, full);
    auto p = poly_mul(qq, poly_variable(qq, 2, 0), poly_variable(qq, 2, 1));
    CHECK_FALSE(is_identically_zero_on_V(qq, p, v2));

    Mat<Rat> diag = {{Rat(1)}, {Rat(1)}};
    SubspaceBasis<RationalField> vd(qq, diag);
    auto d = poly_sub(qq, poly_variable(qq, 2, 0), poly_variable(qq, 2, 1));
    CHECK(is_identically_zero_on_V(qq, d, vd));

    // characteristic 2: X1^2 + X2^2 vanishes on the diagonal
    FunctionField f2(2);
    Mat<FFElem> diag2 = {{f2.one()}, {f2.one()}};
    SubspaceBasis<FunctionField> vf(f2, diag2);
    auto sq = poly_add(f2, mono(f2, 2, {2, 0}), mono(f2, 2, {0, 2}));
    CHECK(is_identically_zero_on_V(f2, sq, vf));
    // in characteristic 2 the linear form X1 + X2 also dies on the diagonal
    auto lin = poly_add(f2, poly_variable(f2, 2, 0), poly_variable(f2, 2, 1));
    CHECK(is_identically_zero_on_V(f2, lin, vf));
    CHECK_FALSE(is_identically_zero_on_V(f2, poly_variable(f2, 2, 0), vf));
}

TEST_CASE("grid witness search") {
    RationalField qq;
    std::vector<std::vector<Rat>> basis = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
    auto p = poly_mul(qq, poly_variable(qq, 2, 0), poly_variable(qq, 2, 1));
    auto w = grid_nonvanishing_witness(qq, p, basis, {Rat(0), Rat(1), Rat(2)});
    REQUIRE(w.xi.has_value());
    CHECK((*w.xi)[0] == 1);
    CHECK((*w.xi)[1] == 1);

    // exhaustion proves vanishing on V
    std::vector<std::vector<Rat>> diag = {{Rat(1), Rat(1)}};
    auto d = poly_sub(qq, poly_variable(qq, 2, 0), poly_variable(qq, 2, 1));
    auto we = grid_nonvanishing_witness(qq, d, diag, {Rat(0), Rat(1)});
    CHECK_FALSE(we.xi.has_value());
    CHECK(we.evaluations == 2);

    // undersized grids are rejected
    CHECK_THROWS_AS(grid_nonvanishing_witness(qq, p, basis, {Rat(0), Rat(1)}), std::invalid_argument);
}

TEST_CASE("tightness: a degree-M polynomial can vanish on an M-element grid") {
    RationalField qq;
    // P = X1(X1-1) + X2(X2-1) vanishes on {0,1}^2 but P(2,0) = 2
    auto term = [&](size_t i) {
        auto xi = poly_variable(qq, 2, i);
        return poly_mul(qq, xi, poly_sub(qq, xi, poly_constant(qq, 2, Rat(1))));
    };
    auto p = poly_add(qq, term(0), term(1));
    for (long a : {0L, 1L})
        for (long b : {0L, 1L}) CHECK(poly_evaluate(qq, p, {Rat(a), Rat(b)}) == 0);
    CHECK(poly_evaluate(qq, p, {Rat(2), Rat(0)}) == 2);
    CHECK_FALSE(p.is_zero());
}

TEST_CASE("solver: product variety over Q, integer grid branch") {
    RationalField qq;
    SubspaceBasis<RationalField> v(qq, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
    VarietyUnion<RationalField> z;
    z.families.push_back({poly_mul(qq, poly_variable(qq, 2, 0), poly_variable(qq, 2, 1))});
    auto cert = solve(qq, v, z);
    CHECK(cert.M == 2);
    CHECK(cert.branch == "integer_grid");
    CHECK(cert.grid_size == 5);  // integers with |k| <= floor(2 sqrt 2) = 2
    REQUIRE(cert.point.size() == 2);
    // the emitted point is grid-minimal: both coordinates are units
    CHECK(abs(cert.point[0]) == 1);
    CHECK(abs(cert.point[1]) == 1);
    CHECK(certified_compare(cert.point_height, Real(1)) == Cmp::equal);
    // bound = 2 * (2 sqrt(2)) * HV = 4 sqrt 2
    CHECK(certified_compare(cert.bound * cert.bound, Real(32)) == Cmp::equal);
    CHECK(cert.verdict);
    CHECK(membership(qq, cert.point, v));
}

TEST_CASE("solver: single linear form over Q, unit grid branch") {
    RationalField qq;
    SubspaceBasis<RationalField> v(qq, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
    VarietyUnion<RationalField> z;
    z.families.push_back({poly_variable(qq, 2, 0)});
    auto cert = solve(qq, v, z);
    CHECK(cert.M == 1);
    CHECK(cert.branch == "unit_grid");
    CHECK(cert.grid_size == 2);
    CHECK(certified_compare(cert.point_height, Real(1)) == Cmp::equal);
    CHECK(certified_compare(cert.xi_height, Real(1)) == Cmp::equal);  // unit grid points
    CHECK(certified_compare(cert.bound, Real(2)) == Cmp::equal);
    CHECK(cert.verdict);
}

TEST_CASE("solver: constant grid over F_3(t) with bound exactly 1") {
    FunctionField f3(3);
    SubspaceBasis<FunctionField> v(f3, {{f3.one(), f3.zero()}, {f3.zero(), f3.one()}});
    VarietyUnion<FunctionField> z;
    z.families.push_back({poly_mul(f3, poly_variable(f3, 2, 0), poly_variable(f3, 2, 1))});
    auto cert = solve(f3, v, z);
    CHECK(cert.M == 2);
    CHECK(cert.branch == "unit_grid");
    CHECK(cert.grid_size == 3);  // all of F_3
    CHECK(cert.point[0] == f3.one());
    CHECK(cert.point[1] == f3.one());
    CHECK(certified_compare(cert.point_height, Real(1)) == Cmp::equal);
    CHECK(certified_compare(cert.bound, Real(1)) == Cmp::equal);
    CHECK(cert.verdict);
}

TEST_CASE("solver: function field integer branch q <= M") {
    FunctionField f2(2);
    SubspaceBasis<FunctionField> v(f2, {{f2.one(), f2.zero()}, {f2.zero(), f2.one()}});
    VarietyUnion<FunctionField> z;
    z.families.push_back({poly_mul(f2, poly_variable(f2, 2, 0), poly_variable(f2, 2, 1))});
    auto cert = solve(f2, v, z);
    CHECK(cert.M == 2);
    CHECK(cert.branch == "integer_grid");
    CHECK(cert.grid_size >= 3);
    CHECK(certified_compare(cert.point_height, Real(1)) == Cmp::equal);  // (1,1) works
    CHECK(cert.verdict);
}

TEST_CASE("solver: quadratic integer branch over Q(i)") {
    QuadraticField g(-1);
    SubspaceBasis<QuadraticField> v(g, {{g.one(), g.zero()}, {g.zero(), g.one()}});
    VarietyUnion<QuadraticField> z;
    // four linear families make M = 4 = omega
    auto form = [&](Rat a, Rat b) {
        return poly_add(g, poly_scale(g, g.from_parts(a, Rat(0)), poly_variable(g, 2, 0)),
                        poly_scale(g, g.from_parts(b, Rat(0)), poly_variable(g, 2, 1)));
    };
    z.families.push_back({form(Rat(1), Rat(0))});
    z.families.push_back({form(Rat(0), Rat(1))});
    z.families.push_back({form(Rat(1), Rat(-1))});
    z.families.push_back({form(Rat(1), Rat(1))});
    auto cert = solve(g, v, z);
    CHECK(cert.M == 4);
    CHECK(cert.branch == "integer_grid");
    CHECK(cert.grid_size == 25);  // Gauss integers with |x|^2 <= 8
    CHECK(certified_compare(cert.point_height, Real(1)) == Cmp::equal);  // e.g. (1, i)
    CHECK(cert.verdict);
    for (size_t i = 0; i < z.families.size(); ++i)
        CHECK_FALSE(g.is_zero(poly_evaluate(g, z.families[i][cert.chosen[i]], cert.point)));
}

TEST_CASE("solver: quadratic unit grid over Q(sqrt -3)") {
    QuadraticField g(-3);
    SubspaceBasis<QuadraticField> v(g, {{g.one(), g.zero()}, {g.zero(), g.one()}});
    VarietyUnion<QuadraticField> z;
    z.families.push_back({poly_mul(g, poly_variable(g, 2, 0), poly_variable(g, 2, 1))});
    auto cert = solve(g, v, z);  // M = 2 < omega = 6
    CHECK(cert.branch == "unit_grid");
    CHECK(cert.grid_size == 6);
    // unit-grid coefficients always have height exactly 1
    CHECK(certified_compare(cert.xi_height, Real(1)) == Cmp::equal);
    CHECK(cert.verdict);
    // every unit-grid element is a root of unity: norm 1
    GridChoice<QuadraticField> grid = avoidance_grid(g, 2);
    for (const auto& u : grid.s1) CHECK(u.norm() == 1);
}

TEST_CASE("solver: variety containing V is rejected") {
    RationalField qq;
    SubspaceBasis<RationalField> vd(qq, {{Rat(1)}, {Rat(1)}});
    VarietyUnion<RationalField> z;
    z.families.push_back({poly_sub(qq, poly_variable(qq, 2, 0), poly_variable(qq, 2, 1))});
    CHECK_THROWS_AS(solve(qq, vd, z), VContainedInVariety);
    // a family is skipped only if some member survives
    VarietyUnion<RationalField> z2;
    z2.families.push_back({poly_sub(qq, poly_variable(qq, 2, 0), poly_variable(qq, 2, 1)),
                           poly_variable(qq, 2, 0)});
    auto cert = solve(qq, vd, z2);
    CHECK(cert.chosen == std::vector<size_t>{1});
    CHECK(cert.verdict);
}

TEST_CASE("subspace avoidance over Q") {
    RationalField qq;
    SubspaceBasis<RationalField> v(qq, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
    SubspaceBasis<RationalField> u1(qq, {{Rat(1)}, {Rat(1)}});
    auto res = subspace_avoidance(qq, v, {u1});
    const auto& cert = res.certificate;
    CHECK(cert.branch == "unit_grid");
    CHECK(certified_compare(cert.point_height, Real(1)) == Cmp::equal);
    CHECK(certified_compare(cert.bound, Real(2)) == Cmp::equal);
    CHECK(cert.verdict);
    // the point is outside U1: the chosen form does not vanish there
    Rat val = 0;
    for (size_t i = 0; i < 2; ++i) val += res.forms[0][i] * cert.point[i];
    CHECK(val != 0);
    REQUIRE(res.corollary_checked);
    CHECK(res.corollary_holds);
}

TEST_CASE("subspace avoidance in Q^3 with two coordinate lines") {
    RationalField qq;
    SubspaceBasis<RationalField> v(qq, {{Rat(1), Rat(0), Rat(0)},
                                        {Rat(0), Rat(1), Rat(0)},
                                        {Rat(0), Rat(0), Rat(1)}});
    SubspaceBasis<RationalField> u1(qq, {{Rat(1)}, {Rat(0)}, {Rat(0)}});
    SubspaceBasis<RationalField> u2(qq, {{Rat(0)}, {Rat(1)}, {Rat(0)}});
    auto res = subspace_avoidance(qq, v, {u1, u2});
    const auto& cert = res.certificate;
    CHECK(cert.M == 2);
    CHECK(certified_compare(cert.point_height, Real(1)) == Cmp::equal);
    CHECK(cert.verdict);
    REQUIRE(res.corollary_checked);
    // (gen_bnd_2)-style value: sqrt(2) * 3 * 2 = 6 sqrt 2
    CHECK(certified_compare(res.corollary_bound * res.corollary_bound, Real(72)) == Cmp::equal);
    CHECK(res.corollary_holds);

    // V contained in the union: V = U1
    CHECK_THROWS_AS(subspace_avoidance(qq, u1, {u1}), VContainedInVariety);
}

TEST_CASE("oracle equivalence of the vanishing test") {
    RationalField qq;
    FunctionField f2(2);
    std::mt19937_64 rng(611);
    std::uniform_int_distribution<long> coef(-2, 2), deg(0, 2), terms(1, 4), dims(1, 3);
    auto run_q = [&]() {
        size_t n = static_cast<size_t>(dims(rng)) + 1, l = static_cast<size_t>(dims(rng));
        if (l > n) l = n;
        Mat<Rat> X(n, std::vector<Rat>(l));
        for (;;) {
            for (auto& row : X)
                for (auto& e : row) e = Rat(coef(rng));
            if (mat_rank(qq, X) == l) break;
        }
        SubspaceBasis<RationalField> s(qq, X);
        std::vector<std::pair<std::vector<unsigned>, Rat>> raw;
        long nt = terms(rng);
        for (long t = 0; t < nt; ++t) {
            std::vector<unsigned> e(n, 0);
            for (auto& k : e) k = static_cast<unsigned>(deg(rng));
            raw.emplace_back(std::move(e), Rat(coef(rng)));
        }
        auto p = poly_from_terms(qq, n, std::move(raw));
        bool fast = is_identically_zero_on_V(qq, p, s);
        bool oracle = restrict_symbolic(qq, p, X).is_zero();
        CHECK(fast == oracle);
    };
    auto run_f = [&]() {
        size_t n = 2, l = 1 + static_cast<size_t>(rng() % 2);
        Mat<FFElem> X(n, std::vector<FFElem>(l));
        for (;;) {
            for (auto& row : X)
                for (auto& e : row) e = FFElem::from_poly(FqPoly(2, {static_cast<unsigned>(rng() % 2),
                                                                    static_cast<unsigned>(rng() % 2)}));
            if (mat_rank(f2, X) == l) break;
        }
        SubspaceBasis<FunctionField> s(f2, X);
        std::vector<std::pair<std::vector<unsigned>, FFElem>> raw;
        long nt = terms(rng);
        for (long t = 0; t < nt; ++t) {
            std::vector<unsigned> e(n, 0);
            for (auto& k : e) k = static_cast<unsigned>(rng() % 3);
            raw.emplace_back(std::move(e),
                             FFElem::from_poly(FqPoly(2, {static_cast<unsigned>(rng() % 2),
                                                          static_cast<unsigned>(rng() % 2)})));
        }
        auto p = poly_from_terms(f2, n, std::move(raw));
        CHECK(is_identically_zero_on_V(f2, p, s) == restrict_symbolic(f2, p, X).is_zero());
    };
    for (int i = 0; i < 60; ++i) run_q();
    for (int i = 0; i < 60; ++i) run_f();
}

TEST_CASE("random end-to-end instances over Q are sound") {
    RationalField qq;
    std::mt19937_64 rng(612);
    std::uniform_int_distribution<long> coef(-2, 2);
    int solved = 0;
    for (int trial = 0; trial < 40; ++trial) {
        size_t n = 3, l = 2;
        Mat<Rat> X(n, std::vector<Rat>(l));
        for (;;) {
            for (auto& row : X)
                for (auto& e : row) e = Rat(coef(rng));
            if (mat_rank(qq, X) == l) break;
        }
        SubspaceBasis<RationalField> s(qq, X);
        VarietyUnion<RationalField> z;
        size_t nf = 1 + rng() % 2;
        for (size_t i = 0; i < nf; ++i) {
            std::vector<std::pair<std::vector<unsigned>, Rat>> raw;
            for (int t = 0; t < 3; ++t) {
                std::vector<unsigned> e(n, 0);
                e[rng() % n] = 1 + static_cast<unsigned>(rng() % 2);
                raw.emplace_back(std::move(e), Rat(coef(rng)));
            }
            auto p = poly_from_terms(qq, n, std::move(raw));
            if (p.degree() < 1) p = poly_variable(qq, n, 0);
            z.families.push_back({p});
        }
        try {
            auto cert = solve(qq, s, z);
            ++solved;
            CHECK(membership(qq, cert.point, s));
            CHECK(cert.verdict);
            for (size_t i = 0; i < z.families.size(); ++i)
                CHECK_FALSE(qq.is_zero(poly_evaluate(qq, z.families[i][cert.chosen[i]], cert.point)));
            CHECK(cert.grid_size >= static_cast<size_t>(cert.M) + 1);
        } catch (const VContainedInVariety&) {
            // valid outcome for random data
        }
    }
    CHECK(solved > 10);
}
