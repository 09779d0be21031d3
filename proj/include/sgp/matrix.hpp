#pragma once

// Dense exact linear algebra over any supported field: determinants, rank,
// kernels and linear solves by Gaussian elimination with exact division.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sgp {

template <typename Elem>
using Mat = std::vector<std::vector<Elem>>;

template <typename F>
Mat<typename F::Elem> mat_transpose(const F&, const Mat<typename F::Elem>& a) {
    if (a.empty()) return {};
    Mat<typename F::Elem> t(a[0].size(), std::vector<typename F::Elem>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

template <typename F>
typename F::Elem mat_det(const F& f, Mat<typename F::Elem> m) {
    size_t n = m.size();
    typename F::Elem det = f.one();
    for (size_t col = 0; col < n; ++col) {
        size_t p = col;
        while (p < n && f.is_zero(m[p][col])) ++p;
        if (p == n) return f.zero();
        if (p != col) {
            std::swap(m[p], m[col]);
            det = f.neg(det);
        }
        det = det * m[col][col];
        auto inv = f.inv(m[col][col]);
        for (size_t i = col + 1; i < n; ++i) {
            if (f.is_zero(m[i][col])) continue;
            // force evaluation: gmpxx expression templates would otherwise
            // alias m[i][col], which the loop below overwrites first
            typename F::Elem fac = m[i][col] * inv;
            for (size_t j = col; j < n; ++j) m[i][j] = m[i][j] - fac * m[col][j];
        }
    }
    return det;
}

// Row echelon reduction in place; returns rank and records pivot columns.
template <typename F>
size_t mat_echelon(const F& f, Mat<typename F::Elem>& m, std::vector<size_t>* pivots = nullptr) {
    size_t r = m.size(), c = r ? m[0].size() : 0;
    size_t piv = 0;
    for (size_t col = 0; col < c && piv < r; ++col) {
        size_t p = piv;
        while (p < r && f.is_zero(m[p][col])) ++p;
        if (p == r) continue;
        std::swap(m[p], m[piv]);
        auto inv = f.inv(m[piv][col]);
        for (size_t j = 0; j < c; ++j) m[piv][j] = m[piv][j] * inv;
        for (size_t i = 0; i < r; ++i) {
            if (i == piv || f.is_zero(m[i][col])) continue;
            auto fac = m[i][col];
            for (size_t j = 0; j < c; ++j) m[i][j] = m[i][j] - fac * m[piv][j];
        }
        if (pivots) pivots->push_back(col);
        ++piv;
    }
    return piv;
}

template <typename F>
size_t mat_rank(const F& f, Mat<typename F::Elem> m) {
    return mat_echelon(f, m);
}

// Basis (rows) of the right kernel { x : A x = 0 }.
template <typename F>
Mat<typename F::Elem> mat_kernel(const F& f, Mat<typename F::Elem> m) {
    size_t c = m.empty() ? 0 : m[0].size();
    std::vector<size_t> pivots;
    size_t rank = mat_echelon(f, m, &pivots);
    std::vector<bool> is_piv(c, false);
    for (size_t p : pivots) is_piv[p] = true;
    Mat<typename F::Elem> ker;
    for (size_t free = 0; free < c; ++free) {
        if (is_piv[free]) continue;
        std::vector<typename F::Elem> v(c, f.zero());
        v[free] = f.one();
        for (size_t i = 0; i < rank; ++i) v[pivots[i]] = f.neg(m[i][free]);
        ker.push_back(std::move(v));
    }
    return ker;
}

// Solve A x = b; returns nullopt if inconsistent. A may be any shape with
// full column rank not required (any solution is returned).
template <typename F>
std::optional<std::vector<typename F::Elem>> mat_solve(const F& f, Mat<typename F::Elem> a,
                                                       const std::vector<typename F::Elem>& b) {
    size_t r = a.size(), c = r ? a[0].size() : 0;
    for (size_t i = 0; i < r; ++i) a[i].push_back(b[i]);
    std::vector<size_t> pivots;
    size_t rank = mat_echelon(f, a, &pivots);
    // inconsistent iff a pivot lands in the appended column
    if (!pivots.empty() && pivots.back() == c) return std::nullopt;
    std::vector<typename F::Elem> x(c, f.zero());
    for (size_t i = 0; i < rank; ++i) x[pivots[i]] = a[i][c];
    return x;
}

}  // namespace sgp
