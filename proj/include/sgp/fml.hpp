#pragma once

// Function-field lattices for the projective line over F_q: the order-vector
// embedding of functions with zeros and poles at rational places, the
// zero-sum lattice it fills at genus 0, and the grid-set counts with the
// certified two-sided bounds.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "sgp/heights.hpp"
#include "sgp/intlattice.hpp"

namespace sgp {

// Places in coordinate order: t - 0, t - 1, ..., t - (q-1), then infinity.
struct FMLLattice {
    unsigned q = 2;
    size_t n = 3;        // q + 1 rational places
    IntMat basis;        // rank n-1 rows spanning the zero-sum lattice
    mpz_class gram_det;  // det of the Gram matrix = (det Lambda)^2
    bool det_identity;   // gram_det == n, i.e. det Lambda = sqrt(n)
};

inline FMLLattice fml_lattice(unsigned q) {
    if (!is_prime(q)) throw std::invalid_argument("q must be prime");
    FMLLattice out;
    out.q = q;
    out.n = q + 1;
    out.basis.assign(out.n - 1, IntVec(out.n, 0));
    for (size_t i = 0; i + 1 < out.n; ++i) {
        out.basis[i][i] = 1;
        out.basis[i][i + 1] = -1;
    }
    IntMat gram(out.n - 1, IntVec(out.n - 1, 0));
    for (size_t i = 0; i + 1 < out.n; ++i)
        for (size_t j = 0; j + 1 < out.n; ++j)
            for (size_t k = 0; k < out.n; ++k) gram[i][j] += out.basis[i][k] * out.basis[j][k];
    // integer determinant by rational elimination
    std::vector<std::vector<mpq_class>> m(gram.size(), std::vector<mpq_class>(gram.size()));
    for (size_t i = 0; i < gram.size(); ++i)
        for (size_t j = 0; j < gram.size(); ++j) m[i][j] = mpq_class(gram[i][j]);
    mpq_class det = 1;
    for (size_t col = 0; col < m.size(); ++col) {
        size_t p = col;
        while (p < m.size() && m[p][col] == 0) ++p;
        if (p == m.size()) {
            det = 0;
            break;
        }
        if (p != col) {
            std::swap(m[p], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t i = col + 1; i < m.size(); ++i) {
            if (m[i][col] == 0) continue;
            mpq_class f = m[i][col] / m[col][col];
            for (size_t j = col; j < m.size(); ++j) m[i][j] -= f * m[col][j];
        }
    }
    out.gram_det = det.get_num() / det.get_den();
    out.det_identity = out.gram_det == static_cast<long>(out.n);
    return out;
}

// Order vector (ord_{t-0} f, ..., ord_{t-(q-1)} f, ord_infinity f). Throws
// if f has a zero or pole outside the rational places.
inline IntVec phi_Y(const FFElem& f) {
    if (f.is_zero()) throw std::domain_error("order vector of zero");
    unsigned q = f.q();
    IntVec v(q + 1, 0);
    int finite_num = 0, finite_den = 0;
    for (unsigned a = 0; a < q; ++a) {
        FqPoly pi(q, {(q - a) % q, 1});  // t - a
        int o = ff_ord_at(f, pi);
        v[a] = o;
        if (o > 0) finite_num += o;
        if (o < 0) finite_den -= o;
    }
    if (finite_num != f.num.deg() || finite_den != f.den.deg())
        throw std::invalid_argument("function has a zero or pole at a non-rational place");
    v[q] = ff_ord_infinity(f);
    return v;
}

// Inverse up to a scalar in F_q^*: f = prod (t - a)^{v_a}, the infinite
// exponent absorbing the degree balance of a zero-sum vector.
inline FFElem divisor_to_function(unsigned q, const IntVec& v) {
    if (v.size() != q + 1) throw std::invalid_argument("expected q+1 coordinates");
    mpz_class sum = 0;
    for (const auto& c : v) sum += c;
    if (sum != 0) throw std::invalid_argument("divisor has nonzero degree");
    FqPoly num = FqPoly::constant(q, 1), den = FqPoly::constant(q, 1);
    for (unsigned a = 0; a < q; ++a) {
        FqPoly pi(q, {(q - a) % q, 1});
        for (mpz_class k = 0; k < abs(v[a]); ++k) {
            if (v[a] > 0)
                num = num * pi;
            else
                den = den * pi;
        }
    }
    return FFElem(std::move(num), std::move(den));
}

// ---------------------------------------------------------------------------
// Grid sets over F_q(t): S_R = { f with zeros/poles at rational places and
// ord_v(f) <= R everywhere }, counted two ways: directly from the one-sided
// definition, and as |Lambda_Y cap C_R^n| + (q-1). The counting lemma
//   2^{n-1}/sqrt(n) (R/(n-1) - sqrt(n))^{n-1} + q-1
//     <= count <= (2R+1)^{n-1} + q-1
// is verified against the second count for R >= (n-1) sqrt(n).

namespace detail {

// number of integer tuples (v_1, ..., v_m) with every v_i in [a, b] and
// v_1 + ... + v_m in [slo, shi], by dynamic programming over partial sums
inline mpz_class box_sum_count(long m, long a, long b, long slo, long shi) {
    if (m <= 0 || a > b) return (m == 0 && slo <= 0 && 0 <= shi) ? 1 : 0;
    long lo = std::min(0L, m * a), hi = std::max(0L, m * b);
    std::vector<mpz_class> dp(static_cast<size_t>(hi - lo + 1), 0);
    dp[static_cast<size_t>(-lo)] = 1;
    for (long k = 0; k < m; ++k) {
        std::vector<mpz_class> nx(dp.size(), 0);
        for (long s = lo; s <= hi; ++s) {
            if (dp[static_cast<size_t>(s - lo)] == 0) continue;
            for (long v = a; v <= b; ++v) {
                long t = s + v;
                if (t < lo || t > hi) continue;
                nx[static_cast<size_t>(t - lo)] += dp[static_cast<size_t>(s - lo)];
            }
        }
        dp.swap(nx);
    }
    mpz_class out = 0;
    for (long s = std::max(slo, lo); s <= std::min(shi, hi); ++s)
        out += dp[static_cast<size_t>(s - lo)];
    return out;
}

}  // namespace detail

struct FFGridCount {
    mpz_class direct_count = 0;
    mpz_class formula_count = 0;
    bool bounds_checked = false;
    bool bounds_hold = false;
    Real lower;
    mpq_class upper;
};

inline FFGridCount enumerate_S_R_functionfield(unsigned q, const mpq_class& R) {
    if (!is_prime(q)) throw std::invalid_argument("q must be prime");
    if (R <= 0) throw std::invalid_argument("need R > 0");
    FMLLattice lat = fml_lattice(q);
    long n = static_cast<long>(lat.n);
    mpz_class rf = R.get_num() / R.get_den();  // floor: lattice vectors are integral

    FFGridCount out;
    long rfl = mpz_get_si(rf.get_mpz_t());

    // |Lambda_Y cap C_R|: zero-sum n-vectors with every coordinate in
    // [-R, R], i.e. n-1 free coordinates whose sum also lands in [-R, R]
    out.formula_count = detail::box_sum_count(n - 1, -rfl, rfl, -rfl, rfl) + (q - 1);

    // direct count per the one-sided definition: zero-sum order vectors with
    // every coordinate <= R; coordinates are then >= -(n-1) floor(R), and the
    // last coordinate -S <= R forces the free sum S >= -R
    mpz_class onesided =
        detail::box_sum_count(n - 1, -(n - 1) * rfl, rfl, -rfl, (n - 1) * rfl);
    out.direct_count = onesided * (q - 1);  // each vector has q-1 preimages

    out.upper = mpq_class(2 * R + 1);
    mpq_class up = 1;
    for (long i = 0; i + 1 < n; ++i) up *= out.upper;
    out.upper = up + (q - 1);

    out.bounds_checked = R * R >= mpq_class((n - 1) * (n - 1) * n);
    if (out.bounds_checked) {
        Real margin = Real::surd(Rat(R) / Rat(n - 1), Rat(-1), n);  // R/(n-1) - sqrt(n)
        mpz_class p2;
        mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(n - 1));
        out.lower = Real(mpq_class(p2)) * (Real(1) / sqrt(Real(n))) * margin.pow_int(n - 1) +
                    Real(q - 1);
        out.bounds_hold = certified_leq(out.lower, Real(mpq_class(out.formula_count))) &&
                          mpq_class(out.formula_count) <= out.upper;
    }
    return out;
}

}  // namespace sgp
