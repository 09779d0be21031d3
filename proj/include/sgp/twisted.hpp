#pragma once

// Twisted heights: finitely supported families of invertible local operators,
// their dilation constants, and the certified comparison between the twisted
// and the untwisted height.

#include <stdexcept>
#include <utility>
#include <vector>

#include "sgp/heights.hpp"
#include "sgp/matrix.hpp"

namespace sgp {

inline bool same_place(const Place& a, const Place& b) {
    if (a.tag != b.tag) return false;
    switch (a.tag) {
        case Place::Tag::rational_prime:
            return a.p == b.p;
        case Place::Tag::quad_archimedean:
            return a.index == b.index;
        case Place::Tag::ff_finite:
            return a.pi.c == b.pi.c;
        default:
            return true;
    }
}

// A family (A_v) of N x N matrices over K, equal to the identity at every
// place other than the finitely many stored ones.
template <typename F>
struct TwistedOperator {
    size_t N = 0;
    std::vector<std::pair<Place, Mat<typename F::Elem>>> components;
};

template <typename F>
TwistedOperator<F> make_twisted_operator(const F& f, size_t N,
                                         std::vector<std::pair<Place, Mat<typename F::Elem>>> comps) {
    if (N == 0) throw std::invalid_argument("need N >= 1");
    for (size_t i = 0; i < comps.size(); ++i) {
        const auto& [v, m] = comps[i];
        if (v.tag == Place::Tag::quad_prime_ideal)
            throw std::invalid_argument("quadratic components are supported at archimedean places only");
        if (m.size() != N) throw std::invalid_argument("component is not N x N");
        for (const auto& row : m)
            if (row.size() != N) throw std::invalid_argument("component is not N x N");
        if (f.is_zero(mat_det(f, m))) throw std::domain_error("singular component matrix");
        for (size_t j = 0; j < i; ++j)
            if (same_place(comps[j].first, v)) throw std::invalid_argument("duplicate place");
    }
    TwistedOperator<F> out;
    out.N = N;
    out.components = std::move(comps);
    return out;
}

namespace detail {

// max_i |x_i|_v over the nonzero coordinates of a nonzero vector
template <typename F>
Real local_sup(const F& f, const std::vector<typename F::Elem>& x, const Place& v) {
    Real m;
    bool first = true;
    for (const auto& c : x) {
        if (f.is_zero(c)) continue;
        Real a = abs_value(f, c, v);
        m = first ? a : max(m, a);
        first = false;
    }
    if (first) throw std::domain_error("zero vector");
    return m;
}

template <typename F>
std::vector<typename F::Elem> apply_component(const F& f, const Mat<typename F::Elem>& m,
                                              const std::vector<typename F::Elem>& x) {
    std::vector<typename F::Elem> y(m.size(), f.zero());
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) y[i] = y[i] + m[i][j] * x[j];
    return y;
}

}  // namespace detail

// Local dilation constant: the sum of the local absolute values of the
// entries; global constant: product over stored places with weights d_v/d.
template <typename F>
Real local_dilation(const F& f, const Mat<typename F::Elem>& m, const Place& v) {
    std::vector<Real> terms;
    for (const auto& row : m)
        for (const auto& e : row)
            if (!f.is_zero(e)) terms.push_back(abs_value(f, e, v));
    if (terms.empty()) throw std::domain_error("zero component matrix");
    Real s = terms[0];  // single-entry sums keep their exact form
    for (size_t i = 1; i < terms.size(); ++i) s = s + terms[i];
    return s;
}

template <typename F>
Real dilation(const F& f, const TwistedOperator<F>& A) {
    long d = descriptor_of(f).invariants().degree;
    Real out(1);
    for (const auto& [v, m] : A.components)
        out = out * local_dilation(f, m, v).pow_rational(mpq_class(v.local_degree, d));
    return out;
}

// H_A(x) = (prod_v H_v(A_v x)^{d_v})^{1/d}. Since A_v is the identity away
// from the stored places, this is H(x) corrected by the stored local ratios.
template <typename F>
Real twisted_height(const F& f, const TwistedOperator<F>& A, const std::vector<typename F::Elem>& x) {
    if (x.size() != A.N) throw std::invalid_argument("dimension mismatch");
    bool zero = true;
    for (const auto& c : x) zero = zero && f.is_zero(c);
    if (zero) throw std::domain_error("zero vector");
    long d = descriptor_of(f).invariants().degree;
    Real out = height_H(f, x);
    for (const auto& [v, m] : A.components) {
        std::vector<typename F::Elem> y = detail::apply_component(f, m, x);
        Real ratio = detail::local_sup(f, y, v) / detail::local_sup(f, x, v);
        out = out * ratio.pow_rational(mpq_class(v.local_degree, d));
    }
    return out;
}

// The comparison H_A(x) <= C(A) H(x), certified.
template <typename F>
bool twisted_comparison_check(const F& f, const TwistedOperator<F>& A,
                              const std::vector<typename F::Elem>& x) {
    return certified_leq(twisted_height(f, A, x), dilation(f, A) * height_H(f, x));
}

}  // namespace sgp
