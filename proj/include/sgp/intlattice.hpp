#pragma once

// Integer lattice machinery: Hermite normal form, integer kernels,
// saturation, and exact cube counting with the certified two-sided bounds.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sgp/real.hpp"

namespace sgp {

using IntMat = std::vector<std::vector<mpz_class>>;
using IntVec = std::vector<mpz_class>;

inline size_t rows(const IntMat& m) { return m.size(); }
inline size_t cols(const IntMat& m) { return m.empty() ? 0 : m[0].size(); }

// Row-style Hermite normal form: unimodular row operations only, pivots
// positive, entries above each pivot reduced. Zero rows are dropped.
inline IntMat hnf_rows(IntMat a) {
    size_t r = rows(a), c = cols(a);
    size_t piv_row = 0;
    for (size_t col = 0; col < c && piv_row < r; ++col) {
        // clear the column below piv_row with gcd steps
        for (size_t i = piv_row + 1; i < r; ++i) {
            while (a[i][col] != 0) {
                if (a[piv_row][col] == 0) {
                    std::swap(a[piv_row], a[i]);
                    continue;
                }
                mpz_class q = a[i][col] / a[piv_row][col];
                for (size_t j = 0; j < c; ++j) a[i][j] -= q * a[piv_row][j];
                if (a[i][col] != 0) std::swap(a[piv_row], a[i]);
            }
        }
        if (a[piv_row][col] == 0) continue;
        if (a[piv_row][col] < 0)
            for (size_t j = 0; j < c; ++j) a[piv_row][j] = -a[piv_row][j];
        // reduce entries above the pivot
        for (size_t i = 0; i < piv_row; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), a[i][col].get_mpz_t(), a[piv_row][col].get_mpz_t());
            if (q != 0)
                for (size_t j = 0; j < c; ++j) a[i][j] -= q * a[piv_row][j];
        }
        ++piv_row;
    }
    a.resize(piv_row);
    return a;
}

// Right integer kernel of a (r x c) matrix: a basis (rows) of
// { x in Z^c : A x = 0 }. The result is saturated.
inline IntMat integer_kernel(const IntMat& a) {
    size_t r = rows(a), c = cols(a);
    // column HNF with transformation: work on transpose rows = columns of A
    IntMat m(c, IntVec(r));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m[j][i] = a[i][j];
    IntMat u(c, IntVec(c, 0));
    for (size_t i = 0; i < c; ++i) u[i][i] = 1;

    size_t piv = 0;
    for (size_t col = 0; col < r && piv < c; ++col) {
        for (size_t i = piv + 1; i < c; ++i) {
            while (m[i][col] != 0) {
                if (m[piv][col] == 0) {
                    std::swap(m[piv], m[i]);
                    std::swap(u[piv], u[i]);
                    continue;
                }
                mpz_class q = m[i][col] / m[piv][col];
                for (size_t j = 0; j < r; ++j) m[i][j] -= q * m[piv][j];
                for (size_t j = 0; j < c; ++j) u[i][j] -= q * u[piv][j];
                if (m[i][col] != 0) {
                    std::swap(m[piv], m[i]);
                    std::swap(u[piv], u[i]);
                }
            }
        }
        if (m[piv][col] != 0) ++piv;
    }
    IntMat ker;
    for (size_t i = piv; i < c; ++i) {
        bool zero = true;
        for (size_t j = 0; j < r; ++j) zero = zero && m[i][j] == 0;
        if (zero) ker.push_back(u[i]);
    }
    return hnf_rows(ker);
}

// Saturation of the row space: a basis of span_Q(rows) intersected with Z^c.
inline IntMat saturate_rows(const IntMat& a) {
    IntMat ker = integer_kernel(a);
    if (ker.empty()) {
        // full column span: saturation is all of Z^c restricted to the span,
        // i.e. the kernel-of-kernel below degenerates; handle directly
        size_t c = cols(a);
        IntMat id(c, IntVec(c, 0));
        for (size_t i = 0; i < c; ++i) id[i][i] = 1;
        return id;
    }
    return integer_kernel(ker);
}

// All k x k minors (absolute values not taken) of a k x n matrix, in
// lexicographic column-subset order.
inline std::vector<mpz_class> maximal_minors(const IntMat& b) {
    size_t k = rows(b), n = cols(b);
    std::vector<mpz_class> out;
    std::vector<size_t> idx(k);
    std::function<void(size_t, size_t)> rec = [&](size_t pos, size_t start) {
        if (pos == k) {
            // bareiss-free: plain fraction determinant via rational elimination
            std::vector<std::vector<mpq_class>> m(k, std::vector<mpq_class>(k));
            for (size_t i = 0; i < k; ++i)
                for (size_t j = 0; j < k; ++j) m[i][j] = mpq_class(b[i][idx[j]]);
            mpq_class det = 1;
            for (size_t col = 0; col < k; ++col) {
                size_t p = col;
                while (p < k && m[p][col] == 0) ++p;
                if (p == k) {
                    det = 0;
                    break;
                }
                if (p != col) {
                    std::swap(m[p], m[col]);
                    det = -det;
                }
                det *= m[col][col];
                for (size_t i = col + 1; i < k; ++i) {
                    if (m[i][col] == 0) continue;
                    mpq_class f = m[i][col] / m[col][col];
                    for (size_t j = col; j < k; ++j) m[i][j] -= f * m[col][j];
                }
            }
            out.push_back(mpz_class(det.get_num() / det.get_den()));
            return;
        }
        for (size_t j = start; j + (k - pos) <= n; ++j) {
            idx[pos] = j;
            rec(pos + 1, j + 1);
        }
    };
    rec(0, 0);
    return out;
}

// Enumerate all lattice vectors v (rows-basis lattice in Z^n) with
// sup-norm <= R, using the HNF pivot structure for exact pruning.
inline std::vector<IntVec> enumerate_supnorm(const IntMat& basis, const mpq_class& radius,
                                             long budget = 10000000) {
    IntMat h = hnf_rows(basis);
    size_t k = rows(h), n = cols(h);
    std::vector<size_t> piv(k);
    for (size_t i = 0; i < k; ++i) {
        size_t j = 0;
        while (j < n && h[i][j] == 0) ++j;
        piv[i] = j;
    }
    std::vector<IntVec> out;
    IntVec v(n, 0);
    std::vector<mpz_class> coef(k, 0);
    long used = 0;
    std::function<void(size_t)> rec = [&](size_t m) {
        if (m == k) {
            for (size_t j = 0; j < n; ++j)
                if (abs(v[j]) > radius) return;
            out.push_back(v);
            return;
        }
        size_t jp = piv[m];
        // partial sum at the pivot coordinate from earlier coefficients
        mpq_class partial(v[jp]);
        mpq_class lo = (-radius - partial) / mpq_class(h[m][jp]);
        mpq_class hi = (radius - partial) / mpq_class(h[m][jp]);
        if (lo > hi) std::swap(lo, hi);
        mpz_class clo, chi;
        mpz_cdiv_q(clo.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
        mpz_fdiv_q(chi.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
        for (mpz_class c = clo; c <= chi; ++c) {
            if (++used > budget) throw std::runtime_error("enumeration budget exhausted");
            for (size_t j = 0; j < n; ++j) v[j] += c * h[m][j];
            rec(m + 1);
            for (size_t j = 0; j < n; ++j) v[j] -= c * h[m][j];
        }
    };
    if (k > 0)
        rec(0);
    else
        out.push_back(v);
    return out;
}

// ---------------------------------------------------------------------------
// Exact cube counts and the lemma bounds.

struct CubeCount {
    mpz_class exact;
    Real lower, upper;
    bool bounds_hold = false;
};

// Full-rank lattice with upper-triangular basis matrix (columns are basis
// vectors), diagonal >= c > 0. Counts |Lambda cap (C_R^n + z)| exactly and
// evaluates the two-sided bound. Preconditions checked.
inline CubeCount cube_count_fullrank(const std::vector<std::vector<mpq_class>>& a, const mpq_class& c,
                                     const mpq_class& radius, const std::vector<mpq_class>& z) {
    size_t n = a.size();
    if (n == 0 || a[0].size() != n) throw std::invalid_argument("basis must be square");
    mpq_class det = 1;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < i; ++j)
            if (a[i][j] != 0) throw std::invalid_argument("basis not upper triangular");
        if (a[i][i] < c || c <= 0) throw std::invalid_argument("diagonal below c");
        det *= a[i][i];
    }
    // 2R >= max(det / c^(n-1), c)
    mpq_class cpow = 1;
    for (size_t i = 0; i + 1 < n; ++i) cpow *= c;
    if (2 * radius < det / cpow || 2 * radius < c) throw std::invalid_argument("radius below lemma threshold");

    mpz_class count = 0;
    std::vector<mpq_class> partial(n, 0);
    std::function<void(size_t)> rec = [&](size_t iplus) {
        if (iplus == 0) {
            ++count;
            return;
        }
        size_t i = iplus - 1;  // coordinates from the bottom row up
        mpq_class lo = (z[i] - radius - partial[i]) / a[i][i];
        mpq_class hi = (z[i] + radius - partial[i]) / a[i][i];
        mpz_class klo, khi;
        mpz_cdiv_q(klo.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
        mpz_fdiv_q(khi.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
        for (mpz_class k = klo; k <= khi; ++k) {
            for (size_t r = 0; r < i; ++r) partial[r] += mpq_class(k) * a[r][i];
            rec(i);
            for (size_t r = 0; r < i; ++r) partial[r] -= mpq_class(k) * a[r][i];
        }
    };
    rec(n);

    CubeCount out;
    out.exact = count;
    mpq_class tl = (2 * radius * cpow / det - 1);
    mpq_class fl = (2 * radius / c - 1);
    mpq_class tu = (2 * radius * cpow / det + 1);
    mpq_class fu = (2 * radius / c + 1);
    mpq_class lower = tl, upper = tu;
    for (size_t i = 0; i + 1 < n; ++i) {
        lower *= fl;
        upper *= fu;
    }
    if (lower < 0) lower = 0;
    out.lower = Real(lower);
    out.upper = Real(upper);
    out.bounds_hold = (mpq_class(count) >= lower) && (mpq_class(count) <= upper);
    return out;
}

// Sublattice of Z^n of rank n - l given by basis rows. Exact count plus
// the bound pair; the lower bound applies only when R is a positive
// integer multiple of (n-l) * Delta.
struct SublatticeCount {
    mpz_class exact;
    mpz_class delta;  // max |Grassmann coordinate|
    mpq_class lower;  // valid only if lower_applies
    mpq_class upper;
    bool lower_applies = false;
    bool bounds_hold = false;
};

inline SublatticeCount cube_count_sublattice(const IntMat& basis, const mpq_class& radius) {
    size_t k = rows(basis), n = cols(basis);
    if (k == 0 || k >= n) throw std::invalid_argument("rank must be between 1 and n-1");
    SublatticeCount out;
    mpz_class delta = 0;
    for (const auto& m : maximal_minors(basis)) delta = std::max(delta, mpz_class(abs(m)));
    if (delta == 0) throw std::invalid_argument("basis rank deficient");
    out.delta = delta;

    out.exact = static_cast<long>(enumerate_supnorm(basis, radius).size());

    mpq_class twoR = 2 * radius;
    out.upper = (twoR / mpq_class(delta) + 1);
    for (size_t i = 0; i + 1 < k; ++i) out.upper *= (twoR + 1);

    mpq_class step = mpq_class(static_cast<long>(k)) * mpq_class(delta);
    mpq_class ratio = radius / step;
    out.lower_applies = radius > 0 && ratio.get_den() == 1;
    bool ok = mpq_class(out.exact) <= out.upper;
    if (out.lower_applies) {
        mpq_class num = 1;
        for (size_t i = 0; i < k; ++i) num *= twoR;
        mpq_class den = mpq_class(delta);
        for (size_t i = 0; i < k; ++i) den *= mpq_class(static_cast<long>(k));
        out.lower = num / den;
        ok = ok && mpq_class(out.exact) >= out.lower;
    }
    out.bounds_hold = ok;
    return out;
}

}  // namespace sgp
