#pragma once

// Subspaces of K^N as basis matrices: Grassmann coordinates in fixed
// lexicographic order, dual forms, the Brill-Gordan duality check, and
// the Schmidt height.

#include <functional>
#include <stdexcept>
#include <vector>

#include "sgp/heights.hpp"
#include "sgp/matrix.hpp"

namespace sgp {

// All L-subsets of {0..N-1} in lexicographic order. This order is part of
// the wire format.
inline std::vector<std::vector<size_t>> index_subsets(size_t n, size_t l) {
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> cur(l);
    std::function<void(size_t, size_t)> rec = [&](size_t pos, size_t start) {
        if (pos == l) {
            out.push_back(cur);
            return;
        }
        for (size_t j = start; j + (l - pos) <= n; ++j) {
            cur[pos] = j;
            rec(pos + 1, j + 1);
        }
    };
    rec(0, 0);
    return out;
}

template <typename F>
struct SubspaceBasis {
    Mat<typename F::Elem> X;  // N x L, columns are the basis vectors
    size_t N = 0, L = 0;

    SubspaceBasis() = default;
    SubspaceBasis(const F& f, Mat<typename F::Elem> x) : X(std::move(x)) {
        N = X.size();
        L = N ? X[0].size() : 0;
        if (L == 0 || L > N) throw std::invalid_argument("need 1 <= L <= N");
        if (mat_rank(f, X) != L) throw std::invalid_argument("basis matrix is rank deficient");
    }

    std::vector<typename F::Elem> column(size_t j) const {
        std::vector<typename F::Elem> c(N);
        for (size_t i = 0; i < N; ++i) c[i] = X[i][j];
        return c;
    }
};

template <typename F>
std::vector<typename F::Elem> grassmann(const F& f, const SubspaceBasis<F>& s) {
    auto subsets = index_subsets(s.N, s.L);
    std::vector<typename F::Elem> out;
    out.reserve(subsets.size());
    for (const auto& I : subsets) {
        Mat<typename F::Elem> sub(s.L, std::vector<typename F::Elem>(s.L));
        for (size_t i = 0; i < s.L; ++i)
            for (size_t j = 0; j < s.L; ++j) sub[i][j] = s.X[I[i]][j];
        out.push_back(mat_det(f, sub));
    }
    return out;
}

// (N-L) x N matrix A with A X = 0 and full rank.
template <typename F>
Mat<typename F::Elem> dual_form(const F& f, const SubspaceBasis<F>& s) {
    return mat_kernel(f, mat_transpose(f, s.X));
}

template <typename F>
struct DualityResult {
    bool verified = false;
    typename F::Elem gamma;
};

// Checks det(X_I) = (-1)^{eps(I')} gamma det(_{I'}A) for all I; gamma is
// recovered from the first index pair with both minors nonzero.
template <typename F>
DualityResult<F> duality_check(const F& f, const SubspaceBasis<F>& s, const Mat<typename F::Elem>& a) {
    DualityResult<F> out;
    out.gamma = f.one();
    if (s.L == s.N) {
        out.verified = true;  // A empty; gamma = 1 by convention
        return out;
    }
    if (a.size() != s.N - s.L || a[0].size() != s.N) throw std::invalid_argument("dual form has wrong shape");
    // verify A X = 0
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < s.L; ++j) {
            typename F::Elem acc = f.zero();
            for (size_t k = 0; k < s.N; ++k) acc = acc + a[i][k] * s.X[k][j];
            if (!f.is_zero(acc)) throw std::invalid_argument("A X != 0");
        }

    auto grX = grassmann(f, s);
    auto subsets = index_subsets(s.N, s.L);
    size_t m = s.N - s.L;
    auto minorA = [&](const std::vector<size_t>& Iprime) {
        Mat<typename F::Elem> sub(m, std::vector<typename F::Elem>(m));
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) sub[i][j] = a[i][Iprime[j]];
        return mat_det(f, sub);
    };
    bool have_gamma = false;
    for (size_t k = 0; k < subsets.size(); ++k) {
        const auto& I = subsets[k];
        std::vector<size_t> Iprime;
        size_t pos = 0;
        long eps = 0;
        for (size_t j = 0; j < s.N; ++j) {
            if (pos < I.size() && I[pos] == j) {
                ++pos;
            } else {
                Iprime.push_back(j);
                eps += static_cast<long>(j) + 1;  // 1-based index sum
            }
        }
        auto detA = minorA(Iprime);
        auto lhs = grX[k];
        auto rhs = (eps % 2 == 0) ? detA : f.neg(detA);
        if (!have_gamma) {
            if (f.is_zero(lhs) != f.is_zero(rhs)) return out;  // inconsistent
            if (!f.is_zero(lhs)) {
                out.gamma = lhs * f.inv(rhs);
                have_gamma = true;
            }
            continue;
        }
        // lhs must equal gamma * rhs
        if (!f.is_zero(lhs - out.gamma * rhs)) return out;
    }
    // re-walk the early all-zero prefix against the recovered gamma
    if (!have_gamma) return out;  // all-zero pairing: cannot happen for full rank
    for (size_t k = 0; k < subsets.size(); ++k) {
        const auto& I = subsets[k];
        std::vector<size_t> Iprime;
        size_t pos = 0;
        long eps = 0;
        for (size_t j = 0; j < s.N; ++j) {
            if (pos < I.size() && I[pos] == j) {
                ++pos;
            } else {
                Iprime.push_back(j);
                eps += static_cast<long>(j) + 1;
            }
        }
        auto detA = minorA(Iprime);
        auto rhs = (eps % 2 == 0) ? detA : f.neg(detA);
        if (!f.is_zero(grX[k] - out.gamma * rhs)) return out;
    }
    out.verified = true;
    return out;
}

template <typename F>
Real subspace_height(const F& f, const SubspaceBasis<F>& s) {
    return height_euclidean(f, grassmann(f, s));
}

template <typename F>
bool membership(const F& f, const std::vector<typename F::Elem>& x, const SubspaceBasis<F>& s) {
    if (x.size() != s.N) throw std::invalid_argument("dimension mismatch");
    return mat_solve(f, s.X, x).has_value();
}

}  // namespace sgp
