#pragma once

// Sparse multivariate polynomials over an exact field: normalized term lists,
// ring operations, exact evaluation, and symbolic restriction to a subspace.

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sgp/matrix.hpp"

namespace sgp {

// Terms are kept sorted by exponent vector, with no zero coefficients and no
// duplicate exponent vectors.
template <typename F>
struct MultivariatePolynomial {
    using Elem = typename F::Elem;

    size_t N = 0;
    std::vector<std::pair<std::vector<unsigned>, Elem>> terms;

    bool is_zero() const { return terms.empty(); }

    // total degree; -1 for the zero polynomial
    long degree() const {
        long d = -1;
        for (const auto& [e, c] : terms) {
            long t = 0;
            for (unsigned k : e) t += k;
            d = std::max(d, t);
        }
        return d;
    }

    long var_degree(size_t i) const {
        long d = -1;
        for (const auto& [e, c] : terms) d = std::max(d, static_cast<long>(e[i]));
        return d;
    }
};

template <typename F>
MultivariatePolynomial<F> poly_from_terms(
    const F& f, size_t N,
    std::vector<std::pair<std::vector<unsigned>, typename F::Elem>> raw) {
    std::map<std::vector<unsigned>, typename F::Elem> acc;
    for (auto& [e, c] : raw) {
        if (e.size() != N) throw std::invalid_argument("exponent vector has wrong length");
        auto it = acc.find(e);
        if (it == acc.end())
            acc.emplace(std::move(e), std::move(c));
        else
            it->second = it->second + c;
    }
    MultivariatePolynomial<F> out;
    out.N = N;
    for (auto& [e, c] : acc)
        if (!f.is_zero(c)) out.terms.emplace_back(e, c);
    return out;
}

template <typename F>
MultivariatePolynomial<F> poly_zero(const F&, size_t N) {
    MultivariatePolynomial<F> out;
    out.N = N;
    return out;
}

template <typename F>
MultivariatePolynomial<F> poly_constant(const F& f, size_t N, typename F::Elem c) {
    return poly_from_terms(f, N, {{std::vector<unsigned>(N, 0), std::move(c)}});
}

template <typename F>
MultivariatePolynomial<F> poly_variable(const F& f, size_t N, size_t i) {
    if (i >= N) throw std::invalid_argument("variable index out of range");
    std::vector<unsigned> e(N, 0);
    e[i] = 1;
    return poly_from_terms(f, N, {{std::move(e), f.one()}});
}

template <typename F>
MultivariatePolynomial<F> poly_add(const F& f, const MultivariatePolynomial<F>& a,
                                   const MultivariatePolynomial<F>& b) {
    if (a.N != b.N) throw std::invalid_argument("variable count mismatch");
    auto raw = a.terms;
    raw.insert(raw.end(), b.terms.begin(), b.terms.end());
    return poly_from_terms(f, a.N, std::move(raw));
}

template <typename F>
MultivariatePolynomial<F> poly_neg(const F& f, const MultivariatePolynomial<F>& a) {
    MultivariatePolynomial<F> out = a;
    for (auto& [e, c] : out.terms) c = f.neg(c);
    return out;
}

template <typename F>
MultivariatePolynomial<F> poly_sub(const F& f, const MultivariatePolynomial<F>& a,
                                   const MultivariatePolynomial<F>& b) {
    return poly_add(f, a, poly_neg(f, b));
}

template <typename F>
MultivariatePolynomial<F> poly_scale(const F& f, const typename F::Elem& c,
                                     const MultivariatePolynomial<F>& a) {
    std::vector<std::pair<std::vector<unsigned>, typename F::Elem>> raw;
    for (const auto& [e, t] : a.terms) raw.emplace_back(e, c * t);
    return poly_from_terms(f, a.N, std::move(raw));
}

template <typename F>
MultivariatePolynomial<F> poly_mul(const F& f, const MultivariatePolynomial<F>& a,
                                   const MultivariatePolynomial<F>& b) {
    if (a.N != b.N) throw std::invalid_argument("variable count mismatch");
    std::vector<std::pair<std::vector<unsigned>, typename F::Elem>> raw;
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            std::vector<unsigned> e(a.N);
            for (size_t i = 0; i < a.N; ++i) e[i] = ea[i] + eb[i];
            raw.emplace_back(std::move(e), ca * cb);
        }
    return poly_from_terms(f, a.N, std::move(raw));
}

template <typename F>
typename F::Elem poly_evaluate(const F& f, const MultivariatePolynomial<F>& p,
                               const std::vector<typename F::Elem>& x) {
    if (x.size() != p.N) throw std::invalid_argument("point has wrong dimension");
    typename F::Elem out = f.zero();
    for (const auto& [e, c] : p.terms) {
        typename F::Elem t = c;
        for (size_t i = 0; i < p.N; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t = t * x[i];
        out = out + t;
    }
    return out;
}

// Symbolic restriction of P to the column span of the N x L matrix X: the
// polynomial P_V(Y_1..Y_L) = P(X Y) obtained by substituting each variable
// with the corresponding linear form and expanding. Intended as an oracle
// for small instances; composition-by-evaluation is the production path.
template <typename F>
MultivariatePolynomial<F> restrict_symbolic(const F& f, const MultivariatePolynomial<F>& p,
                                            const Mat<typename F::Elem>& X) {
    size_t N = X.size();
    if (N != p.N) throw std::invalid_argument("basis has wrong ambient dimension");
    size_t L = N ? X[0].size() : 0;
    std::vector<MultivariatePolynomial<F>> lin(N, poly_zero(f, L));
    for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < L; ++j)
            lin[i] = poly_add(f, lin[i], poly_scale(f, X[i][j], poly_variable(f, L, j)));
    MultivariatePolynomial<F> out = poly_zero(f, L);
    for (const auto& [e, c] : p.terms) {
        MultivariatePolynomial<F> t = poly_constant(f, L, c);
        for (size_t i = 0; i < N; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t = poly_mul(f, t, lin[i]);
        out = poly_add(f, out, t);
    }
    return out;
}

}  // namespace sgp
