#pragma once

// Minkowski embeddings of rings of integers, exact enumeration of the grid
// sets S_R over number fields, and the certified counting bounds for
// algebraic integers of bounded height.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "sgp/heights.hpp"
#include "sgp/intlattice.hpp"
#include "sgp/matrix.hpp"

namespace sgp {

// ---------------------------------------------------------------------------
// Minkowski embedding sigma: O_K -> R^d, real embeddings first, then
// (Re, Im) pairs of one complex embedding per conjugate pair.

struct MinkowskiLattice {
    FieldDescriptor fd;
    Mat<Real> basis;     // d x d, rows = sigma(integral basis)
    Real det;            // |det(basis)|
    bool det_identity;   // det == sqrt(|D_K|) / 2^{r2}, exact
};

inline MinkowskiLattice minkowski_embed(const FieldDescriptor& fd) {
    MinkowskiLattice out;
    out.fd = fd;
    FieldInvariants inv = fd.invariants();
    if (fd.kind == FieldKind::rational) {
        out.basis = {{Real(1)}};
        out.det = Real(1);
    } else if (fd.kind == FieldKind::quadratic) {
        QuadraticField f(fd.d);
        bool half = f.half_integral_basis();
        Rat wa = half ? Rat(1, 2) : Rat(0);
        Rat wb = half ? Rat(1, 2) : Rat(1);
        if (fd.d > 0) {
            // two real embeddings; det = conj(omega) - omega = -2 wb sqrt(d)
            out.basis = {{Real(1), Real(1)},
                         {Real::surd(wa, wb, fd.d), Real::surd(wa, -wb, fd.d)}};
            out.det = abs(Real::surd(Rat(0), -2 * wb, fd.d));
        } else {
            // one complex embedding: coordinates (Re, Im); det = wb sqrt(|d|)
            out.basis = {{Real(1), Real(0)},
                         {Real(wa), Real::surd(Rat(0), wb, -fd.d)}};
            out.det = Real::surd(Rat(0), wb, -fd.d);
        }
    } else {
        throw std::invalid_argument("Minkowski embedding is a number-field construction");
    }
    mpz_class absD = abs(mpz_class(inv.discriminant));
    Real target = sqrt(Real(mpq_class(absD, mpz_class(1) << (2 * inv.r2))));
    out.det_identity = certified_compare(out.det, target) == Cmp::equal;
    return out;
}

// ---------------------------------------------------------------------------
// Grid sets S_R = { x in O_K : |x|_v <= R at every archimedean place },
// enumerated exactly and ordered by Weil height, then coordinatewise.

namespace detail {

// an integer B with B >= sqrt(x), for bounding enumeration boxes
inline mpz_class sqrt_upper(const mpq_class& x) {
    if (x <= 0) return 0;
    mpz_class fl = x.get_num() / x.get_den();
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), fl.get_mpz_t());
    return r + 1;
}

}  // namespace detail

inline std::vector<Rat> grid_S_R(const RationalField&, const mpq_class& R) {
    if (R < 1) throw std::invalid_argument("need R >= 1");
    mpz_class b = R.get_num() / R.get_den();
    std::vector<Rat> out;
    out.emplace_back(0);
    for (mpz_class k = 1; k <= b; ++k) {
        out.emplace_back(k);
        out.emplace_back(-k);
    }
    return out;
}

inline std::vector<Quad> grid_S_R(const QuadraticField& f, const mpq_class& R) {
    if (R < 1) throw std::invalid_argument("need R >= 1");
    bool half = f.half_integral_basis();
    Rat wa = half ? Rat(1, 2) : Rat(0);
    Rat wb = half ? Rat(1, 2) : Rat(1);
    mpq_class R2 = R * R;

    std::vector<Quad> out;
    // x = u + v*omega = (u + v*wa) + (v*wb) sqrt(d)
    mpz_class vb = detail::sqrt_upper(R2 / (mpq_class(abs(mpz_class(f.d))) * wb * wb));
    for (mpz_class v = -vb; v <= vb; ++v) {
        // the embedding constraints force |u + v*wa| <= R
        mpq_class shift = mpq_class(v) * wa;
        mpq_class reach = R + abs(shift);
        mpz_class ulo = detail::sqrt_upper(reach * reach);
        for (mpz_class u = -ulo; u <= ulo; ++u) {
            Quad x(Rat(mpq_class(u) + shift), Rat(mpq_class(v) * wb), f.d);
            bool in = true;
            if (f.d < 0) {
                in = quad_cx_abs_sq(x) <= Rat(R2);
            } else {
                for (int s : {1, -1})
                    in = in && certified_leq(abs(quad_embedding_value(x, s)), Real(R));
            }
            if (in) out.push_back(x);
        }
    }
    std::stable_sort(out.begin(), out.end(), [&](const Quad& x, const Quad& y) {
        try {
            Cmp c = certified_compare(weil_height(f, x), weil_height(f, y));
            if (c != Cmp::equal) return c == Cmp::less;
        } catch (const UnresolvedComparison&) {
        }
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    return out;
}

// Conjugate floor: the largest embedding coordinate of a nonzero algebraic
// integer is at least 1/sqrt(2).
inline bool conjugate_floor_check(const RationalField&, const Rat& x) {
    return x.get_den() == 1 && (x == 0 || abs(x) >= 1);
}

inline bool conjugate_floor_check(const QuadraticField& f, const Quad& x) {
    if (x.is_zero()) return true;
    Real m;
    if (f.d < 0) {
        // coordinates (a, b sqrt|d|)
        Rat msq = std::max(Rat(x.a * x.a), Rat(Rat(-f.d) * x.b * x.b));
        m = sqrt(Real(mpq_class(msq)));
    } else {
        m = max(abs(quad_embedding_value(x, 1)), abs(quad_embedding_value(x, -1)));
    }
    return certified_leq(sqrt(Real(mpq_class(1, 2))), m);
}

// ---------------------------------------------------------------------------
// The counting lemma: for R >= sqrt(2^{r1} |D|),
//   (2^{r1}|D|)^{-1/2} R^d < |S_R| < 2^{2d+1/2} (2^{r1}|D|)^{-1/2} R^d.

struct GridCount {
    mpz_class size = 0;
    bool bounds_checked = false;  // R reached the lemma threshold
    bool bounds_hold = false;
    Real lower, upper;
};

inline GridCount grid_count_check(const FieldDescriptor& fd, const mpq_class& R, const mpz_class& size) {
    FieldInvariants inv = fd.invariants();
    long d = inv.degree;
    mpz_class w = abs(mpz_class(inv.discriminant)) << inv.r1;  // 2^{r1} |D|
    GridCount out;
    out.size = size;
    out.bounds_checked = R >= 0 && R * R >= w;
    Real rd = Real(mpq_class(R)).pow_int(d);
    Real invsq = nth_root(Real(mpq_class(mpz_class(1), w)), 2);  // (2^{r1}|D|)^{-1/2}
    out.lower = rd * invsq;
    mpz_class f22;
    mpz_ui_pow_ui(f22.get_mpz_t(), 2, static_cast<unsigned long>(4 * d + 1));
    out.upper = rd * nth_root(Real(mpq_class(f22, w)), 2);  // 2^{2d+1/2} (2^{r1}|D|)^{-1/2}
    if (out.bounds_checked)
        out.bounds_hold = certified_compare(out.lower, Real(mpq_class(size))) == Cmp::less &&
                          certified_compare(Real(mpq_class(size)), out.upper) == Cmp::less;
    return out;
}

// ---------------------------------------------------------------------------
// Corollary: (2^{r1}|D|)^{-1/2} R^d < #{ x in O_K : h(x) <= R } whenever
// R >= sqrt(2^{r1}|D|), via S_R being a subset of the height ball.

struct BoundedHeightCount {
    mpz_class grid_size = 0;
    bool heights_ok = false;   // every grid element has h <= R
    bool lower_holds = false;  // strict lower bound against grid_size
    Real lower;
};

template <typename F>
BoundedHeightCount count_integers_of_bounded_height(const F& f, const mpq_class& R) {
    FieldDescriptor fd = descriptor_of(f);
    FieldInvariants inv = fd.invariants();
    mpz_class w = abs(mpz_class(inv.discriminant)) << inv.r1;
    if (!(R >= 0 && R * R >= w)) throw std::invalid_argument("need R >= sqrt(2^{r1} |D|)");
    auto grid = grid_S_R(f, R);
    BoundedHeightCount out;
    out.grid_size = grid.size();
    out.heights_ok = true;
    for (const auto& x : grid)
        out.heights_ok = out.heights_ok && certified_leq(weil_height(f, x), Real(mpq_class(R)));
    out.lower = Real(mpq_class(R)).pow_int(inv.degree) * nth_root(Real(mpq_class(mpz_class(1), w)), 2);
    out.lower_holds = certified_compare(out.lower, Real(mpq_class(out.grid_size))) == Cmp::less;
    return out;
}

}  // namespace sgp
