#include "acceptance.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "sgp/avoid.hpp"
#include "sgp/twisted.hpp"

namespace sgp_tools {

using namespace sgp;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (detail.empty()) detail = why;
    }
    void expect(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

// ---------------------------------------------------------------------------
// Random generators.

Rat rand_rat(std::mt19937_64& rng, long nmax, long dmax, bool nonzero) {
    std::uniform_int_distribution<long> num(-nmax, nmax), den(1, dmax);
    for (;;) {
        mpq_class q(num(rng), den(rng));
        q.canonicalize();
        if (!nonzero || q != 0) return Rat(q);
    }
}

Rat rand_int(std::mt19937_64& rng, long m, bool nonzero = false) {
    std::uniform_int_distribution<long> d(-m, m);
    for (;;) {
        long v = d(rng);
        if (!nonzero || v != 0) return Rat(v);
    }
}

FqPoly rand_poly(std::mt19937_64& rng, unsigned q, int maxdeg, bool nonzero) {
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<unsigned> coef(0, q - 1);
    for (;;) {
        int d = deg(rng);
        std::vector<unsigned> c(static_cast<size_t>(d) + 1);
        for (auto& x : c) x = coef(rng);
        FqPoly p(q, c);
        if (!nonzero || !p.is_zero()) return p;
    }
}

template <typename F, typename Gen>
SubspaceBasis<F> random_subspace(const F& f, std::mt19937_64& rng, size_t N, size_t L, Gen gen) {
    for (;;) {
        Mat<typename F::Elem> X(N, std::vector<typename F::Elem>(L, f.zero()));
        for (auto& row : X)
            for (auto& e : row) e = gen(rng);
        if (mat_rank(f, X) == L) return SubspaceBasis<F>(f, std::move(X));
    }
}

template <typename F>
bool is_zero_vector(const F& f, const std::vector<typename F::Elem>& x) {
    for (const auto& c : x)
        if (!f.is_zero(c)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// 1. Product formula.

Outcome crit_product_formula(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    RationalField qq;
    for (int i = 0; i < 1000; ++i)
        out.expect(product_formula_check(qq, rand_rat(rng, 50, 50, true)).ok, "Q scalar " + std::to_string(i));
    for (long d : {-1L, 2L, -3L, 5L}) {
        QuadraticField f(d);
        for (int i = 0; i < 1000; ++i) {
            Quad a = f.from_parts(rand_rat(rng, 9, 4, false), rand_rat(rng, 9, 4, false));
            if (a.is_zero()) a = f.one();
            out.expect(product_formula_check(f, a).ok,
                       "quadratic d=" + std::to_string(d) + " scalar " + std::to_string(i));
        }
    }
    for (unsigned q : {2u, 3u}) {
        FunctionField f(q);
        for (int i = 0; i < 1000; ++i) {
            FFElem a(rand_poly(rng, q, 3, true), rand_poly(rng, q, 3, true));
            out.expect(product_formula_check(f, a).ok,
                       "F_" + std::to_string(q) + "(t) scalar " + std::to_string(i));
        }
    }
    if (out.pass) out.detail = "7000 exact checks";
    return out;
}

// ---------------------------------------------------------------------------
// 2. Height sandwich and absoluteness.

template <typename F, typename Gen>
bool sandwich_one(const F& f, std::mt19937_64& rng, size_t n, Gen gen) {
    std::vector<typename F::Elem> x(n, f.zero());
    for (auto& e : x) e = gen(rng);
    if (is_zero_vector(f, x)) x[0] = f.one();
    Real H = height_H(f, x);
    Real E = height_euclidean(f, x);
    return certified_leq(H, E) && certified_leq(E, sqrt(Real(static_cast<long>(n))) * H);
}

Outcome crit_sandwich(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> dim(1, 4);
    RationalField qq;
    QuadraticField qi(-1), q2(2), qm3(-3), q5(5);
    FunctionField f2(2), f3(3);
    mpq_class eps(mpz_class(1), mpz_class(1) << 50);
    for (int i = 0; i < 500; ++i) {
        size_t n = dim(rng);
        bool ok = true;
        switch (i % 7) {
            case 0: ok = sandwich_one(qq, rng, n, [&](auto& r) { return rand_rat(r, 9, 4, false); }); break;
            case 1: ok = sandwich_one(qi, rng, n, [&](auto& r) { return qi.from_parts(rand_int(r, 3), rand_int(r, 3)); }); break;
            case 2: ok = sandwich_one(q2, rng, n, [&](auto& r) { return q2.from_parts(rand_int(r, 3), rand_int(r, 3)); }); break;
            case 3: ok = sandwich_one(qm3, rng, n, [&](auto& r) { return qm3.from_parts(rand_int(r, 3), rand_int(r, 3)); }); break;
            case 4: ok = sandwich_one(q5, rng, n, [&](auto& r) { return q5.from_parts(rand_int(r, 3), rand_int(r, 3)); }); break;
            case 5: ok = sandwich_one(f2, rng, n, [&](auto& r) { return FFElem::from_poly(rand_poly(r, 2, 3, false)); }); break;
            default: ok = sandwich_one(f3, rng, n, [&](auto& r) { return FFElem::from_poly(rand_poly(r, 3, 3, false)); }); break;
        }
        out.expect(ok, "sandwich failed at vector " + std::to_string(i));

        // cross-field agreement of H on a rational vector, to width 2^-50
        std::vector<Rat> x(n, Rat(0));
        for (auto& e : x) e = rand_rat(rng, 9, 4, false);
        if (is_zero_vector(qq, x)) x[0] = Rat(1);
        Real h0 = height_H(qq, x);
        std::vector<Quad> xi_v, x2_v;
        for (const auto& e : x) {
            xi_v.push_back(qi.from_parts(e, Rat(0)));
            x2_v.push_back(q2.from_parts(e, Rat(0)));
        }
        for (const Real& hk : {height_H(qi, xi_v), height_H(q2, x2_v)}) {
            Ival iv = (hk - h0).enclose(128);
            out.expect(iv.lo >= -eps && iv.hi <= eps,
                       "cross-field disagreement at vector " + std::to_string(i));
        }
    }
    if (out.pass) out.detail = "500 sandwich + 1000 cross-field checks";
    return out;
}

// ---------------------------------------------------------------------------
// 3. Duality.

template <typename F, typename Gen>
void duality_batch(const F& f, std::mt19937_64& rng, int count, Gen gen, Outcome& out,
                   const std::string& label) {
    std::uniform_int_distribution<size_t> dn(2, 6);
    for (int i = 0; i < count; ++i) {
        size_t N = dn(rng);
        std::uniform_int_distribution<size_t> dl(1, N);
        size_t L = dl(rng);
        auto s = random_subspace(f, rng, N, L, gen);
        auto a = dual_form(f, s);
        out.expect(duality_check(f, s, a).verified, label + ": minors identity failed at " + std::to_string(i));
        if (L < N) {
            SubspaceBasis<F> dual(f, mat_transpose(f, a));
            out.expect(certified_compare(subspace_height(f, s), subspace_height(f, dual)) == Cmp::equal,
                       label + ": dual height mismatch at " + std::to_string(i));
        }
    }
}

Outcome crit_duality(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    RationalField qq;
    duality_batch(qq, rng, 100, [](auto& r) { return rand_int(r, 5); }, out, "Q");
    for (long d : {-1L, 2L, -3L, 5L}) {
        QuadraticField f(d);
        duality_batch(f, rng, 100, [&f](auto& r) { return f.from_parts(rand_int(r, 2), rand_int(r, 2)); },
                      out, "Q(sqrt " + std::to_string(d) + ")");
    }
    for (unsigned q : {2u, 3u}) {
        FunctionField f(q);
        duality_batch(f, rng, 100, [q](auto& r) { return FFElem::from_poly(rand_poly(r, q, 2, false)); },
                      out, "F_" + std::to_string(q) + "(t)");
    }
    if (out.pass) out.detail = "100 subspaces x 7 fields, N <= 6";
    return out;
}

// ---------------------------------------------------------------------------
// 4. Siegel bound over Q.

Outcome crit_siegel_rational(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    RationalField qq;
    std::uniform_int_distribution<size_t> dn(2, 6);
    for (int i = 0; i < 100; ++i) {
        size_t N = dn(rng);
        std::uniform_int_distribution<size_t> dl(1, N);
        size_t L = dl(rng);
        auto s = random_subspace(qq, rng, N, L, [](auto& r) { return rand_int(r, 9); });
        auto sb = siegel_basis_rational(qq, s);
        if (sb.budget_exhausted || sb.vectors.size() != L) {
            out.fail("basis search exhausted at " + std::to_string(i));
            continue;
        }
        out.expect(sb.certified, "product bound not certified at " + std::to_string(i));

        // lower bound: prod H >= N^{-L/2} HV, i.e. (prod H)^2 N^L >= HV^2, exactly
        auto gr = primitive_integer_vector(grassmann(qq, s));
        mpz_class hv2 = 0;
        for (const auto& g : gr) hv2 += g * g;
        mpq_class prodH = 1;
        for (const auto& h : sb.heights_H) prodH *= h.exact_value();
        mpq_class lhs = prodH * prodH;
        for (size_t k = 0; k < L; ++k) lhs *= static_cast<long>(N);
        out.expect(lhs >= hv2, "lower bound violated at " + std::to_string(i));
    }
    if (out.pass) out.detail = "100 subspaces, exact squared comparisons";
    return out;
}

// ---------------------------------------------------------------------------
// 5. Siegel bound over F_2(t), F_3(t).

Outcome crit_siegel_function_field(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    for (unsigned q : {2u, 3u}) {
        FunctionField f(q);
        std::uniform_int_distribution<size_t> dn(2, 5);
        for (int i = 0; i < 50; ++i) {
            size_t N = dn(rng);
            std::uniform_int_distribution<size_t> dl(1, std::min<size_t>(3, N));
            size_t L = dl(rng);
            auto s = random_subspace(f, rng, N, L,
                                     [q](auto& r) { return FFElem::from_poly(rand_poly(r, q, 4, false)); });
            auto sb = siegel_basis_function_field(f, s);
            std::string tag = "q=" + std::to_string(q) + " instance " + std::to_string(i);
            out.expect(sb.certified, tag + ": exponent bound not certified");
            for (size_t k = 0; k < sb.vectors.size(); ++k)
                out.expect(sb.heights_h[k].exact_log_value() == sb.heights_H[k].exact_log_value(),
                           tag + ": h != H on basis vector");
        }
    }
    if (out.pass) out.detail = "100 subspaces, integer exponent comparisons";
    return out;
}

// ---------------------------------------------------------------------------
// 6. Full-rank cube counts.

Outcome crit_cube_fullrank(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    // worked case: diag(2,1), R = 2 attains the upper bound 15
    auto w = cube_count_fullrank({{mpq_class(2), mpq_class(0)}, {mpq_class(0), mpq_class(1)}},
                                 mpq_class(1), mpq_class(2), {mpq_class(0), mpq_class(0)});
    out.expect(w.exact == 15 && w.upper.is_exact() && w.upper.exact_value() == 15 && w.bounds_hold,
               "diag(2,1) reference case");

    std::uniform_int_distribution<size_t> dn(1, 4);
    std::uniform_int_distribution<long> diag(1, 5), off(-5, 5), zsel(-4, 4);
    for (int i = 0; i < 50; ++i) {
        size_t n = dn(rng);
        std::vector<std::vector<mpq_class>> a;
        mpq_class det;
        do {
            a.assign(n, std::vector<mpq_class>(n, 0));
            det = 1;
            for (size_t r = 0; r < n; ++r) {
                a[r][r] = diag(rng);
                det *= a[r][r];
                for (size_t c = r + 1; c < n; ++c) a[r][c] = off(rng);
            }
        } while (det > 20);
        long rlo = std::max(1L, static_cast<long>(mpz_class((det.get_num() + 1) / 2).get_si()));
        std::uniform_int_distribution<long> dr(rlo, 10);
        mpq_class R(dr(rng));
        std::vector<mpq_class> z(n);
        for (auto& zi : z) {
            zi = mpq_class(zsel(rng), 2);
            zi.canonicalize();
        }
        auto r = cube_count_fullrank(a, mpq_class(1), R, z);
        out.expect(r.bounds_hold, "bounds violated at lattice " + std::to_string(i));
    }
    if (out.pass) out.detail = "50 random lattices + reference case, exact counts";
    return out;
}

// ---------------------------------------------------------------------------
// 7. Sublattice cube counts.

Outcome crit_cube_sublattice(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    // zero-sum lattices
    IntMat zs2 = {{1, -1, 0}, {0, 1, -1}};
    IntMat zs3 = {{1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}};
    for (const auto& [b, r] : std::vector<std::pair<IntMat, long>>{{zs2, 2}, {zs2, 3}, {zs3, 3}, {zs3, 6}}) {
        auto c = cube_count_sublattice(b, mpq_class(r));
        out.expect(c.bounds_hold, "zero-sum lattice bounds violated at R=" + std::to_string(r));
    }

    std::uniform_int_distribution<size_t> dn(2, 4);
    std::uniform_int_distribution<long> ent(-3, 3), rad(1, 10), mul(1, 2);
    for (int i = 0; i < 50; ++i) {
        size_t n = dn(rng);
        std::uniform_int_distribution<size_t> dk(1, n - 1);
        size_t k = dk(rng);
        for (;;) {
            IntMat b(k, IntVec(n, 0));
            for (auto& row : b)
                for (auto& e : row) e = ent(rng);
            try {
                // half the trials hit the exact lower-bound lattice points
                mpz_class delta = 0;
                for (const auto& m : maximal_minors(b)) delta = std::max(delta, mpz_class(abs(m)));
                if (delta == 0) continue;
                // hit the lower-bound lattice points exactly when the step is
                // small enough to keep the enumeration desk-sized
                mpq_class step = mpq_class(mpz_class(static_cast<long>(k)) * delta);
                mpq_class R = (i % 2 == 0 && step <= 10) ? step * mul(rng) : mpq_class(rad(rng));
                auto c = cube_count_sublattice(b, R);
                out.expect(c.bounds_hold, "bounds violated at sublattice " + std::to_string(i));
                break;
            } catch (const std::invalid_argument&) {
                continue;  // rank-deficient draw
            }
        }
    }
    if (out.pass) out.detail = "50 random sublattices + zero-sum cases, exact counts";
    return out;
}

// ---------------------------------------------------------------------------
// 8. Number-field grid counting bounds.

long first_radius(const mpz_class& w) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), w.get_mpz_t());
    if (r * r < w) ++r;
    return r.get_si();
}

Outcome crit_grid_count(unsigned long seed) {
    Outcome out;
    (void)seed;
    auto run = [&](const FieldDescriptor& fd, auto& f, const std::string& label) {
        FieldInvariants inv = fd.invariants();
        mpz_class w = abs(mpz_class(inv.discriminant)) << inv.r1;
        long r0 = first_radius(w);
        for (long R = r0; R < r0 + 10; ++R) {
            auto grid = grid_S_R(f, mpq_class(R));
            auto c = grid_count_check(fd, mpq_class(R), mpz_class(grid.size()));
            out.expect(c.bounds_checked && c.bounds_hold,
                       label + ": bounds violated at R=" + std::to_string(R));
            if (fd.kind == FieldKind::rational && R == 2) {
                out.expect(c.size == 5, "Q reference size");
                out.expect(certified_compare(c.lower, sqrt(Real(2))) == Cmp::equal, "Q reference lower bound");
            }
            if (fd.kind == FieldKind::quadratic && fd.d == -1 && R == 3) {
                out.expect(c.size == 29, "Q(i) reference size");
                out.expect(c.lower.is_exact() && c.lower.exact_value() == mpq_class(9, 2),
                           "Q(i) reference lower bound");
            }
        }
    };
    RationalField qq;
    run(FieldDescriptor::rational(), qq, "Q");
    for (long d : {-1L, 2L, -3L, 5L}) {
        QuadraticField f(d);
        run(FieldDescriptor::quadratic(d), f, "Q(sqrt " + std::to_string(d) + ")");
    }
    if (out.pass) out.detail = "5 fields x 10 radii, strict inequalities certified";
    return out;
}

// ---------------------------------------------------------------------------
// 9. Lower bound for integers of bounded height.

Outcome crit_bounded_height_count(unsigned long seed) {
    Outcome out;
    (void)seed;
    auto run = [&](auto& f, const mpz_class& w, const std::string& label) {
        long r0 = first_radius(w);
        for (long R = r0; R < r0 + 10; ++R) {
            auto c = count_integers_of_bounded_height(f, mpq_class(R));
            out.expect(c.heights_ok, label + ": grid element above height R=" + std::to_string(R));
            out.expect(c.lower_holds, label + ": lower bound fails at R=" + std::to_string(R));
        }
    };
    RationalField qq;
    run(qq, mpz_class(2), "Q");
    for (long d : {-1L, 2L, -3L, 5L}) {
        QuadraticField f(d);
        FieldInvariants inv = FieldDescriptor::quadratic(d).invariants();
        run(f, abs(mpz_class(inv.discriminant)) << inv.r1, "Q(sqrt " + std::to_string(d) + ")");
    }
    if (out.pass) out.detail = "5 fields x 10 radii, element-wise height checks";
    return out;
}

// ---------------------------------------------------------------------------
// 10. Function-field grid counting bounds.

Outcome crit_grid_count_ff(unsigned long seed) {
    Outcome out;
    (void)seed;
    for (unsigned q : {2u, 3u, 5u}) {
        long n = static_cast<long>(q) + 1;
        // smallest integer radius meeting R >= (n-1) sqrt(n)
        long r0 = 1;
        while (r0 * r0 < (n - 1) * (n - 1) * n) ++r0;
        for (long R = r0; R < r0 + 10; ++R) {
            auto c = enumerate_S_R_functionfield(q, mpq_class(R));
            out.expect(c.bounds_checked && c.bounds_hold,
                       "q=" + std::to_string(q) + ": bounds violated at R=" + std::to_string(R));
        }
    }
    // plug-in identity: q=3, M=5 gives R = 9 exactly and lower bound 6 = M+1
    auto c = constants(FieldDescriptor::function(3), 1, 5);
    out.expect(c.R.is_exact() && c.R.exact_value() == 9, "R_K(5) != 9 over F_3(t)");
    auto g = enumerate_S_R_functionfield(3, mpq_class(9));
    out.expect(certified_compare(g.lower, Real(6)) == Cmp::equal, "lower bound at R=9 is not exactly 6");
    if (out.pass) out.detail = "q in {2,3,5} x 10 radii + exact plug-in identity";
    return out;
}

// ---------------------------------------------------------------------------
// 11. Main theorem end-to-end.

template <typename F, typename CGen>
MultivariatePolynomial<F> random_poly_nd(const F& f, std::mt19937_64& rng, size_t N, CGen coeff) {
    std::uniform_int_distribution<int> nterms(1, 3), dtotal(1, 3);
    std::uniform_int_distribution<size_t> var(0, N - 1);
    for (;;) {
        std::vector<std::pair<std::vector<unsigned>, typename F::Elem>> raw;
        int t = nterms(rng);
        for (int k = 0; k < t; ++k) {
            std::vector<unsigned> e(N, 0);
            int d = dtotal(rng);
            for (int j = 0; j < d; ++j) ++e[var(rng)];
            raw.emplace_back(std::move(e), coeff(rng));
        }
        auto p = poly_from_terms(f, N, std::move(raw));
        if (p.degree() >= 1) return p;
    }
}

template <typename F, typename EGen, typename CGen>
void end_to_end_batch(const F& f, std::mt19937_64& rng, int count, size_t maxL, EGen entry,
                      CGen coeff, Outcome& out, const std::string& label) {
    std::uniform_int_distribution<size_t> dn(2, 5);
    std::uniform_int_distribution<int> dj(1, 3), dfam(1, 2);
    int done = 0, attempts = 0;
    while (done < count && attempts < 30 * count) {
        ++attempts;
        size_t N = dn(rng);
        std::uniform_int_distribution<size_t> dl(1, std::min(maxL, N));
        size_t L = dl(rng);
        auto s = random_subspace(f, rng, N, L, entry);
        VarietyUnion<F> z;
        int J = dj(rng);
        for (int j = 0; j < J; ++j) {
            std::vector<MultivariatePolynomial<F>> fam;
            int m = dfam(rng);
            for (int k = 0; k < m; ++k) fam.push_back(random_poly_nd(f, rng, N, coeff));
            z.families.push_back(std::move(fam));
        }
        AvoidanceCertificate<F> cert;
        try {
            cert = solve(f, s, z, 100000);
        } catch (const VContainedInVariety&) {
            continue;  // V lies inside the union; draw a fresh instance
        }
        ++done;
        std::string tag = label + " instance " + std::to_string(done);
        out.expect(membership(f, cert.point, s) || is_zero_vector(f, cert.point), tag + ": point outside V");
        MultivariatePolynomial<F> P = poly_constant(f, s.N, f.one());
        for (size_t i = 0; i < z.families.size(); ++i) P = poly_mul(f, P, z.families[i][cert.chosen[i]]);
        for (size_t i = 0; i < z.families.size(); ++i)
            out.expect(!f.is_zero(poly_evaluate(f, z.families[i][cert.chosen[i]], cert.point)),
                       tag + ": chosen polynomial vanishes at the point");
        out.expect(cert.verdict, tag + ": height bound not certified");

        // exhaustive grid-minimality sweep on small grids
        mpz_class tuples = 1;
        for (size_t i = 0; i < L; ++i) tuples *= static_cast<long>(cert.grid_size);
        if (tuples > 100000) continue;
        GridChoice<F> grid = avoidance_grid(f, cert.M);
        std::vector<size_t> idx(L, 0);
        bool swept_ok = true;
        for (;;) {
            std::vector<typename F::Elem> x(s.N, f.zero());
            for (size_t j = 0; j < L; ++j)
                for (size_t i = 0; i < s.N; ++i) x[i] = x[i] + grid.s1[idx[j]] * cert.basis[j][i];
            if (!f.is_zero(poly_evaluate(f, P, x))) {
                Real h = is_zero_vector(f, x) ? Real(1) : height_h(f, x);
                if (!certified_leq(cert.point_height, h)) swept_ok = false;
            }
            size_t j = 0;
            while (j < L && ++idx[j] == grid.s1.size()) idx[j++] = 0;
            if (j == L) break;
        }
        out.expect(swept_ok, tag + ": emitted point not grid-minimal");
    }
    out.expect(done == count, label + ": only " + std::to_string(done) + " solvable instances drawn");
}

Outcome crit_end_to_end(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    RationalField qq;
    end_to_end_batch(qq, rng, 200, 3, [](auto& r) { return rand_int(r, 9); },
                     [](auto& r) { return rand_int(r, 9, true); }, out, "Q");
    for (long d : {-1L, 2L, -3L, 5L}) {
        QuadraticField f(d);
        end_to_end_batch(f, rng, 200, 2,
                         [&f](auto& r) { return f.from_parts(rand_int(r, 3), rand_int(r, 3)); },
                         [&f](auto& r) {
                             for (;;) {
                                 Quad c = f.from_parts(rand_int(r, 3), rand_int(r, 3));
                                 if (!c.is_zero()) return c;
                             }
                         },
                         out, "Q(sqrt " + std::to_string(d) + ")");
    }
    for (unsigned q : {2u, 3u}) {
        FunctionField f(q);
        end_to_end_batch(f, rng, 200, 3,
                         [q](auto& r) { return FFElem::from_poly(rand_poly(r, q, 2, false)); },
                         [q](auto& r) { return FFElem::from_poly(rand_poly(r, q, 2, true)); }, out,
                         "F_" + std::to_string(q) + "(t)");
    }
    if (out.pass) out.detail = "200 instances x 7 fields, certified + minimality sweeps";
    return out;
}

// ---------------------------------------------------------------------------
// 12. Subspace avoidance corollary.

template <typename F, typename EGen>
void corollary_batch(const F& f, std::mt19937_64& rng, int count, size_t maxL, EGen entry,
                     Outcome& out, const std::string& label) {
    std::uniform_int_distribution<size_t> dn(2, 4);
    std::uniform_int_distribution<int> dm(1, 3);
    int done = 0, attempts = 0;
    while (done < count && attempts < 30 * count) {
        ++attempts;
        size_t N = dn(rng);
        std::uniform_int_distribution<size_t> dl(1, std::min(maxL, N));
        auto s = random_subspace(f, rng, N, dl(rng), entry);
        std::vector<SubspaceBasis<F>> us;
        int m = dm(rng);
        std::uniform_int_distribution<size_t> du(1, N - 1);
        for (int k = 0; k < m; ++k) us.push_back(random_subspace(f, rng, N, du(rng), entry));
        SubspaceAvoidanceResult<F> res;
        try {
            res = subspace_avoidance(f, s, us, 100000);
        } catch (const VContainedInVariety&) {
            continue;
        }
        ++done;
        std::string tag = label + " instance " + std::to_string(done);
        out.expect(res.certificate.verdict, tag + ": general bound not certified");
        out.expect(res.corollary_checked && res.corollary_holds, tag + ": corollary bound not certified");
        for (const auto& form : res.forms) {
            typename F::Elem acc = f.zero();
            for (size_t i = 0; i < N; ++i) acc = acc + form[i] * res.certificate.point[i];
            out.expect(!f.is_zero(acc), tag + ": point lies on an avoided hyperplane");
        }
    }
    out.expect(done == count, label + ": only " + std::to_string(done) + " solvable instances drawn");
}

Outcome crit_corollary(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    RationalField qq;
    QuadraticField qi(-1);
    corollary_batch(qq, rng, 50, 3, [](auto& r) { return rand_int(r, 5); }, out, "Q");
    corollary_batch(qi, rng, 50, 2, [&qi](auto& r) { return qi.from_parts(rand_int(r, 2), rand_int(r, 2)); },
                    out, "Q(i)");
    if (out.pass) out.detail = "100 instances over Q and Q(i), closed-form bound certified";
    return out;
}

// ---------------------------------------------------------------------------
// 13. Nullstellensatz tightness.

Outcome crit_tightness(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    RationalField qq;
    std::uniform_int_distribution<size_t> dn(1, 3), ds(1, 4);
    for (int trial = 0; trial < 20; ++trial) {
        size_t N = dn(rng), m = ds(rng);
        std::vector<Rat> alpha;
        while (alpha.size() < m) {
            Rat a = rand_rat(rng, 4, 2, false);
            if (std::find(alpha.begin(), alpha.end(), a) == alpha.end()) alpha.push_back(a);
        }
        MultivariatePolynomial<RationalField> P = poly_zero(qq, N);
        for (size_t i = 0; i < N; ++i) {
            MultivariatePolynomial<RationalField> prod = poly_constant(qq, N, qq.one());
            for (const Rat& a : alpha)
                prod = poly_mul(qq, prod,
                                poly_sub(qq, poly_variable(qq, N, i), poly_constant(qq, N, a)));
            P = poly_add(qq, P, prod);
        }
        out.expect(!P.is_zero(), "P symbolically zero at trial " + std::to_string(trial));
        std::vector<size_t> idx(N, 0);
        bool vanishes = true;
        for (;;) {
            std::vector<Rat> x(N);
            for (size_t i = 0; i < N; ++i) x[i] = alpha[idx[i]];
            vanishes = vanishes && qq.is_zero(poly_evaluate(qq, P, x));
            size_t j = 0;
            while (j < N && ++idx[j] == m) idx[j++] = 0;
            if (j == N) break;
        }
        out.expect(vanishes, "P does not vanish on the grid at trial " + std::to_string(trial));
    }
    if (out.pass) out.detail = "20 grids, vanishing + symbolic nonzero, exact";
    return out;
}

// ---------------------------------------------------------------------------
// 14. Grid-test oracle equivalence.

template <typename F, typename EGen, typename CGen>
void oracle_batch(const F& f, std::mt19937_64& rng, int count, EGen entry, CGen coeff, Outcome& out,
                  const std::string& label) {
    std::uniform_int_distribution<size_t> dn(1, 3);
    for (int i = 0; i < count; ++i) {
        size_t N = dn(rng);
        std::uniform_int_distribution<size_t> dl(1, N);
        auto s = random_subspace(f, rng, N, dl(rng), entry);
        auto p = random_poly_nd(f, rng, N, coeff);
        bool grid = is_identically_zero_on_V(f, p, s);
        bool symbolic = restrict_symbolic(f, p, s.X).is_zero();
        out.expect(grid == symbolic, label + ": oracle mismatch at instance " + std::to_string(i));
    }
}

Outcome crit_oracle(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    RationalField qq;
    FunctionField f2(2);
    oracle_batch(qq, rng, 250, [](auto& r) { return rand_int(r, 3); },
                 [](auto& r) { return rand_int(r, 3, true); }, out, "Q");
    oracle_batch(f2, rng, 250, [](auto& r) { return FFElem::from_poly(rand_poly(r, 2, 2, false)); },
                 [](auto& r) { return FFElem::from_poly(rand_poly(r, 2, 2, true)); }, out, "F_2(t)");
    if (out.pass) out.detail = "500 instances over Q and F_2(t), exact agreement";
    return out;
}

// ---------------------------------------------------------------------------
// 15. Twisted heights.

Outcome crit_twisted(unsigned long seed) {
    Outcome out;
    std::mt19937_64 rng(seed);
    RationalField qq;
    QuadraticField qi(-1);
    std::uniform_int_distribution<size_t> dim(1, 3);
    std::uniform_int_distribution<int> ncomp(1, 3);
    std::vector<Place> pool = {Place::rational_infinite(), Place::rational_prime(2),
                               Place::rational_prime(3)};

    // identity operator: dilation constant exactly 1
    auto idq = make_twisted_operator(qq, 2, {});
    out.expect(dilation(qq, idq).is_exact() && dilation(qq, idq).exact_value() == 1, "C(I) != 1 over Q");
    auto idi = make_twisted_operator(qi, 2, {});
    out.expect(dilation(qi, idi).is_exact() && dilation(qi, idi).exact_value() == 1, "C(I) != 1 over Q(i)");

    for (int i = 0; i < 100; ++i) {
        size_t n = dim(rng);
        size_t nc = static_cast<size_t>(ncomp(rng));
        std::vector<std::pair<Place, Mat<Rat>>> comps;
        for (size_t c = 0; c < nc && c < pool.size(); ++c) {
            Mat<Rat> m;
            do {
                m.assign(n, std::vector<Rat>(n, Rat(0)));
                for (auto& row : m)
                    for (auto& e : row) e = rand_rat(rng, 4, 4, false);
            } while (qq.is_zero(mat_det(qq, m)));
            comps.emplace_back(pool[c], m);
        }
        auto A = make_twisted_operator(qq, n, comps);
        std::vector<Rat> x(n, Rat(0));
        for (auto& e : x) e = rand_rat(rng, 4, 4, false);
        if (is_zero_vector(qq, x)) x[0] = Rat(1);
        out.expect(twisted_comparison_check(qq, A, x), "Q comparison failed at " + std::to_string(i));
    }
    Place arch = Place::quad_archimedean(1, 2);
    for (int i = 0; i < 100; ++i) {
        size_t n = dim(rng);
        Mat<Quad> m;
        do {
            m.assign(n, std::vector<Quad>(n, qi.zero()));
            for (auto& row : m)
                for (auto& e : row) e = qi.from_parts(rand_int(rng, 2), rand_int(rng, 2));
        } while (qi.is_zero(mat_det(qi, m)));
        auto A = make_twisted_operator(qi, n, {{arch, m}});
        std::vector<Quad> x(n, qi.zero());
        for (auto& e : x) e = qi.from_parts(rand_int(rng, 2), rand_int(rng, 2));
        if (is_zero_vector(qi, x)) x[0] = qi.one();
        out.expect(twisted_comparison_check(qi, A, x), "Q(i) comparison failed at " + std::to_string(i));
    }
    if (out.pass) out.detail = "200 operators over Q and Q(i) + exact identity dilation";
    return out;
}

// ---------------------------------------------------------------------------

struct Criterion {
    std::string title;
    Outcome (*fn)(unsigned long);
};

const std::vector<Criterion> kCriteria = {
    {"product formula", crit_product_formula},
    {"height sandwich and absoluteness", crit_sandwich},
    {"minor duality", crit_duality},
    {"reduced basis bound over Q", crit_siegel_rational},
    {"reduced basis bound over F_q(t)", crit_siegel_function_field},
    {"full-rank cube counts", crit_cube_fullrank},
    {"sublattice cube counts", crit_cube_sublattice},
    {"number-field grid counting bounds", crit_grid_count},
    {"bounded-height integer count", crit_bounded_height_count},
    {"function-field grid counting bounds", crit_grid_count_ff},
    {"small-point search end-to-end", crit_end_to_end},
    {"subspace avoidance corollary", crit_corollary},
    {"grid vanishing tightness", crit_tightness},
    {"grid-test oracle equivalence", crit_oracle},
    {"twisted height comparison", crit_twisted},
};

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

int run_acceptance(const AcceptanceOptions& opt, std::ostream& os) {
    std::vector<size_t> selected;
    std::string want = lower(opt.suite);
    if (want.empty() || want == "all") {
        for (size_t i = 0; i < kCriteria.size(); ++i) selected.push_back(i);
    } else if (!want.empty() && std::all_of(want.begin(), want.end(),
                                            [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        size_t k = std::stoul(want);
        if (k < 1 || k > kCriteria.size()) throw std::invalid_argument("criterion number out of range");
        selected.push_back(k - 1);
    } else {
        for (size_t i = 0; i < kCriteria.size(); ++i)
            if (lower(kCriteria[i].title).find(want) != std::string::npos) selected.push_back(i);
        if (selected.empty()) throw std::invalid_argument("no criterion matches suite '" + opt.suite + "'");
    }

    int failures = 0;
    for (size_t i : selected) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = kCriteria[i].fn(opt.seed * 131 + static_cast<unsigned long>(i));
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::ostringstream line;
        line << '[' << (i + 1 < 10 ? " " : "") << (i + 1) << "/15] " << (o.pass ? "PASS" : "FAIL")
             << "  " << kCriteria[i].title << " — " << o.detail << " (";
        line.precision(2);
        line << std::fixed << dt << "s)";
        os << line.str() << '\n';
    }
    return failures;
}

}  // namespace sgp_tools
