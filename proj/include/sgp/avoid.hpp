#pragma once

// The constructive avoidance algorithm: given a subspace V of K^N and a
// finite union of varieties not containing V, produce a point of V outside
// the union together with a certified height bound, via a combinatorial
// non-vanishing grid built from counting estimates.

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgp/fml.hpp"
#include "sgp/minkowski.hpp"
#include "sgp/poly.hpp"
#include "sgp/siegel.hpp"
#include "sgp/subspace.hpp"

namespace sgp {

struct VContainedInVariety : std::runtime_error {
    VContainedInVariety() : std::runtime_error("the subspace is contained in the variety union") {}
};

// ---------------------------------------------------------------------------
// Canonical element sequences, used for the identically-zero test. The field
// is infinite, so any deg+1 distinct elements decide vanishing on V.

inline std::vector<Rat> canonical_elements(const RationalField& f, size_t n) {
    std::vector<Rat> out;
    for (size_t i = 0; i < n; ++i) out.push_back(f.from_int(static_cast<long>(i)));
    return out;
}

inline std::vector<Quad> canonical_elements(const QuadraticField& f, size_t n) {
    std::vector<Quad> out;
    for (size_t i = 0; i < n; ++i) out.push_back(f.from_int(static_cast<long>(i)));
    return out;
}

inline std::vector<FFElem> canonical_elements(const FunctionField& f, size_t n) {
    // polynomials enumerated by base-q digit strings: 0, 1, .., q-1, t, t+1, ...
    std::vector<FFElem> out;
    for (size_t i = 0; i < n; ++i) {
        std::vector<unsigned> digits;
        size_t m = i;
        while (m) {
            digits.push_back(static_cast<unsigned>(m % f.q));
            m /= f.q;
        }
        out.push_back(FFElem::from_poly(FqPoly(f.q, digits)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Vanishing on V, decided exactly through the grid criterion.

namespace detail {

template <typename F>
std::vector<typename F::Elem> combine_point(const F& f,
                                            const std::vector<std::vector<typename F::Elem>>& basis,
                                            const std::vector<typename F::Elem>& xi) {
    size_t n = basis.empty() ? 0 : basis[0].size();
    std::vector<typename F::Elem> x(n, f.zero());
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < n; ++j) x[j] = x[j] + xi[i] * basis[i][j];
    return x;
}

}  // namespace detail

template <typename F>
bool is_identically_zero_on_V(const F& f, const MultivariatePolynomial<F>& p,
                              const SubspaceBasis<F>& s) {
    if (p.is_zero()) return true;
    if (p.N != s.N) throw std::invalid_argument("polynomial has wrong ambient dimension");
    std::vector<std::vector<typename F::Elem>> basis;
    for (size_t j = 0; j < s.L; ++j) basis.push_back(s.column(j));
    auto grid = canonical_elements(f, static_cast<size_t>(p.degree()) + 1);
    std::vector<size_t> idx(s.L, 0);
    for (;;) {
        std::vector<typename F::Elem> xi;
        for (size_t i : idx) xi.push_back(grid[i]);
        if (!f.is_zero(poly_evaluate(f, p, detail::combine_point(f, basis, xi)))) return false;
        size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == grid.size()) idx[pos++] = 0;
        if (pos == idx.size()) return true;
    }
}

// ---------------------------------------------------------------------------
// Grid search for a non-vanishing witness.

template <typename F>
struct WitnessResult {
    std::optional<std::vector<typename F::Elem>> xi;
    unsigned long evaluations = 0;
};

// Enumerates S1^L and returns the first xi with P(v(xi)) != 0. Small grids
// are sorted by the height of the resulting point (ties by h(xi), then by
// index order), so the emitted point is grid-minimal; larger grids are
// walked in graded index order. Exhaustion proves P vanishes on V.
template <typename F>
WitnessResult<F> grid_nonvanishing_witness(const F& f, const MultivariatePolynomial<F>& p,
                                           const std::vector<std::vector<typename F::Elem>>& basis,
                                           const std::vector<typename F::Elem>& s1,
                                           size_t sort_limit = 50000) {
    size_t L = basis.size();
    if (L == 0) throw std::invalid_argument("empty basis");
    if (p.degree() >= 0 && s1.size() < static_cast<size_t>(p.degree()) + 1)
        throw std::invalid_argument("grid is smaller than deg P + 1");
    WitnessResult<F> out;

    mpz_class total = 1;
    for (size_t i = 0; i < L; ++i) total *= static_cast<long>(s1.size());

    auto test = [&](const std::vector<size_t>& idx) -> std::optional<std::vector<typename F::Elem>> {
        std::vector<typename F::Elem> xi;
        for (size_t i : idx) xi.push_back(s1[i]);
        ++out.evaluations;
        if (!f.is_zero(poly_evaluate(f, p, detail::combine_point(f, basis, xi)))) return xi;
        return std::nullopt;
    };

    if (total <= static_cast<long>(sort_limit)) {
        struct Entry {
            std::vector<size_t> idx;
            Real hx, hxi;
        };
        std::vector<Entry> entries;
        std::vector<size_t> idx(L, 0);
        for (;;) {
            std::vector<typename F::Elem> xi;
            for (size_t i : idx) xi.push_back(s1[i]);
            auto x = detail::combine_point(f, basis, xi);
            bool zero = true;
            for (const auto& c : x) zero = zero && f.is_zero(c);
            Real hx = zero ? Real(1) : height_h(f, x);
            entries.push_back({idx, hx, height_h(f, xi)});
            size_t pos = 0;
            while (pos < idx.size() && ++idx[pos] == s1.size()) idx[pos++] = 0;
            if (pos == idx.size()) break;
        }
        auto leq = [](const Real& a, const Real& b) -> int {
            try {
                Cmp c = certified_compare(a, b);
                return c == Cmp::less ? -1 : (c == Cmp::greater ? 1 : 0);
            } catch (const UnresolvedComparison&) {
                return 0;
            }
        };
        std::stable_sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
            int c = leq(a.hx, b.hx);
            if (c) return c < 0;
            c = leq(a.hxi, b.hxi);
            if (c) return c < 0;
            return a.idx < b.idx;
        });
        for (const auto& e : entries) {
            auto xi = test(e.idx);
            if (xi) {
                out.xi = std::move(xi);
                return out;
            }
        }
        return out;
    }

    // graded by index sum, lexicographic within a level
    size_t top = s1.size() - 1;
    for (size_t sum = 0; sum <= top * L; ++sum) {
        std::vector<size_t> idx(L, 0);
        std::function<bool(size_t, size_t)> rec = [&](size_t pos, size_t rem) -> bool {
            if (pos == L) {
                if (rem) return false;
                auto xi = test(idx);
                if (xi) out.xi = std::move(xi);
                return out.xi.has_value();
            }
            for (size_t v = 0; v <= std::min(rem, top); ++v) {
                idx[pos] = v;
                if (rec(pos + 1, rem - v)) return true;
            }
            return false;
        };
        if (rec(0, sum)) return out;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grid set construction, by branch.

template <typename F>
struct GridChoice {
    std::vector<typename F::Elem> s1;
    std::string branch;  // "integer_grid" or "unit_grid"
    Real radius;         // elements have h <= radius on the integer branch
};

inline GridChoice<RationalField> avoidance_grid(const RationalField& f, long M) {
    GridChoice<RationalField> out;
    if (M >= 2) {  // roots of unity in Q: 2
        mpz_class r2 = 2 * mpz_class(M) * M, k;
        mpz_sqrt(k.get_mpz_t(), r2.get_mpz_t());
        out.s1 = grid_S_R(f, mpq_class(k));
        out.branch = "integer_grid";
        out.radius = sqrt(Real(mpq_class(r2)));
    } else {
        out.s1 = {Rat(1), Rat(-1)};
        out.branch = "unit_grid";
        out.radius = Real(1);
    }
    return out;
}

inline GridChoice<QuadraticField> avoidance_grid(const QuadraticField& f, long M) {
    FieldInvariants inv = descriptor_of(f).invariants();
    GridChoice<QuadraticField> out;
    if (inv.roots_of_unity <= M) {
        // R^4 = 2^{r1} |D| M^2 is an integer; filter exactly against it
        mpz_class r4 = (abs(mpz_class(inv.discriminant)) << inv.r1) * M * M;
        Real R = nth_root(Real(mpq_class(r4)), 4);
        out.radius = R;
        out.branch = "integer_grid";

        bool half = f.half_integral_basis();
        Rat wa = half ? Rat(1, 2) : Rat(0);
        Rat wb = half ? Rat(1, 2) : Rat(1);
        // rational over-approximation of R for the enumeration box
        mpz_class rov = detail::sqrt_upper(mpq_class(detail::sqrt_upper(mpq_class(r4))));
        mpq_class rq(rov), r2q = rq * rq;
        mpz_class vb = detail::sqrt_upper(r2q / (mpq_class(abs(mpz_class(f.d))) * wb * wb));
        for (mpz_class v = -vb; v <= vb; ++v) {
            mpq_class shift = mpq_class(v) * wa;
            mpq_class reach = rq + abs(shift);
            mpz_class ulo = detail::sqrt_upper(reach * reach);
            for (mpz_class u = -ulo; u <= ulo; ++u) {
                Quad x(Rat(mpq_class(u) + shift), Rat(mpq_class(v) * wb), f.d);
                bool in = true;
                if (f.d < 0) {
                    // |x|^2 <= R^2 iff |x|^4 <= r4, an exact rational test
                    mpq_class a2 = quad_cx_abs_sq(x);
                    in = a2 * a2 <= mpq_class(r4);
                } else {
                    for (int sg : {1, -1})
                        in = in && certified_leq(abs(quad_embedding_value(x, sg)), R);
                }
                if (in) out.s1.push_back(x);
            }
        }
        std::stable_sort(out.s1.begin(), out.s1.end(), [&](const Quad& x, const Quad& y) {
            try {
                Cmp c = certified_compare(weil_height(f, x), weil_height(f, y));
                if (c != Cmp::equal) return c == Cmp::less;
            } catch (const UnresolvedComparison&) {
            }
            if (x.a != y.a) return x.a < y.a;
            return x.b < y.b;
        });
    } else {
        out.branch = "unit_grid";
        out.radius = Real(1);
        out.s1 = {f.one(), f.neg(f.one())};
        if (f.d == -1) {
            out.s1.push_back(f.from_parts(Rat(0), Rat(1)));    // i
            out.s1.push_back(f.from_parts(Rat(0), Rat(-1)));   // -i
        } else if (f.d == -3) {
            for (long sa : {1, -1})
                for (long sb : {1, -1})
                    out.s1.push_back(f.from_parts(Rat(sa, 2), Rat(sb, 2)));  // primitive sixth roots
        }
    }
    return out;
}

inline GridChoice<FunctionField> avoidance_grid(const FunctionField& f, long M) {
    GridChoice<FunctionField> out;
    long q = static_cast<long>(f.q);
    if (q <= M) {
        Real R = constants(descriptor_of(f), 1, M).R;
        out.radius = R.is_exact() ? Real::exp_of_rational(R.exact_value()) : exp(R);
        out.branch = "integer_grid";
        long k = 0;
        while (certified_leq(Real(mpq_class(k + 1)), R)) ++k;
        FMLLattice lat = fml_lattice(f.q);
        for (const auto& v : enumerate_supnorm(lat.basis, mpq_class(k))) {
            FFElem base = divisor_to_function(f.q, v);
            for (long c = 1; c < q; ++c)
                out.s1.push_back(base * FFElem::constant(f.q, static_cast<unsigned>(c)));
        }
        std::stable_sort(out.s1.begin(), out.s1.end(), [&](const FFElem& a, const FFElem& b) {
            long ha = std::max(a.num.deg(), a.den.deg());
            long hb = std::max(b.num.deg(), b.den.deg());
            if (ha != hb) return ha < hb;
            if (a.den.c != b.den.c) return a.den.c < b.den.c;
            return a.num.c < b.num.c;
        });
    } else {
        out.branch = "unit_grid";  // all of F_q, 0 included to reach M+1 elements
        out.radius = Real(1);
        for (long c = 0; c < q; ++c) out.s1.push_back(FFElem::constant(f.q, static_cast<unsigned>(c)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The variety union and the certificate.

template <typename F>
struct VarietyUnion {
    std::vector<std::vector<MultivariatePolynomial<F>>> families;

    // M_i and M, always recomputed from the stored polynomials
    std::vector<long> family_degrees() const {
        std::vector<long> out;
        for (const auto& fam : families) {
            if (fam.empty()) throw std::invalid_argument("empty polynomial family");
            long m = 0;
            for (const auto& p : fam) {
                if (p.degree() < 1) throw std::invalid_argument("variety polynomials must have degree >= 1");
                m = std::max(m, p.degree());
            }
            out.push_back(m);
        }
        return out;
    }

    long total_degree() const {
        long m = 0;
        for (long d : family_degrees()) m += d;
        return m;
    }
};

template <typename F>
struct AvoidanceCertificate {
    std::vector<typename F::Elem> point;
    std::vector<typename F::Elem> xi;
    std::vector<std::vector<typename F::Elem>> basis;  // Siegel basis used
    std::vector<size_t> chosen;                        // j_i per family
    std::string branch;
    Real radius;
    size_t grid_size = 0;
    long M = 0;
    Real point_height, xi_height, bound;
    bool verdict = false;
    bool basis_certified = false;
    unsigned long evaluations = 0;
};

namespace detail {

inline SiegelBasis<RationalField> siegel_for(const RationalField& f, const SubspaceBasis<RationalField>& s) {
    return siegel_basis_rational(f, s);
}
inline SiegelBasis<QuadraticField> siegel_for(const QuadraticField& f, const SubspaceBasis<QuadraticField>& s) {
    return siegel_certify_quadratic(f, s);
}
inline SiegelBasis<FunctionField> siegel_for(const FunctionField& f, const SubspaceBasis<FunctionField>& s) {
    return siegel_basis_function_field(f, s);
}

}  // namespace detail

template <typename F>
AvoidanceCertificate<F> solve(const F& f, const SubspaceBasis<F>& s, const VarietyUnion<F>& z,
                              size_t sort_limit = 50000) {
    if (z.families.empty()) throw std::invalid_argument("no varieties given");
    AvoidanceCertificate<F> out;
    out.M = z.total_degree();

    // per family, the smallest index whose polynomial survives on V
    MultivariatePolynomial<F> P = poly_constant(f, s.N, f.one());
    for (const auto& fam : z.families) {
        bool found = false;
        for (size_t j = 0; j < fam.size(); ++j) {
            if (!is_identically_zero_on_V(f, fam[j], s)) {
                out.chosen.push_back(j);
                P = poly_mul(f, P, fam[j]);
                found = true;
                break;
            }
        }
        if (!found) throw VContainedInVariety();
    }

    SiegelBasis<F> sb = detail::siegel_for(f, s);
    if (sb.vectors.size() != s.L)
        throw std::runtime_error("reduced basis search exhausted its budget");
    out.basis = sb.vectors;
    out.basis_certified = sb.certified;

    GridChoice<F> grid = avoidance_grid(f, out.M);
    if (grid.s1.size() < static_cast<size_t>(out.M) + 1)
        throw std::logic_error("grid smaller than M + 1");
    out.branch = grid.branch;
    out.radius = grid.radius;
    out.grid_size = grid.s1.size();

    WitnessResult<F> w = grid_nonvanishing_witness(f, P, out.basis, grid.s1, sort_limit);
    out.evaluations = w.evaluations;
    if (!w.xi) throw std::logic_error("grid exhausted despite |S1| > deg P");
    out.xi = *w.xi;
    out.point = detail::combine_point(f, out.basis, out.xi);

    bool zero = true;
    for (const auto& c : out.point) zero = zero && f.is_zero(c);
    out.point_height = zero ? Real(1) : height_h(f, out.point);
    bool xzero = true;
    for (const auto& c : out.xi) xzero = xzero && f.is_zero(c);
    out.xi_height = xzero ? Real(1) : height_h(f, out.xi);
    out.bound = main_bound(descriptor_of(f), static_cast<long>(s.L), out.M, subspace_height(f, s));
    out.verdict = certified_leq(out.point_height, out.bound);
    return out;
}

// ---------------------------------------------------------------------------
// Subspace avoidance: extend each subspace to a hyperplane not containing V,
// take the product of the defining linear forms, and delegate.

template <typename F>
struct SubspaceAvoidanceResult {
    AvoidanceCertificate<F> certificate;
    std::vector<std::vector<typename F::Elem>> forms;  // one linear form per subspace
    bool corollary_checked = false;                    // number-field closed-form bound
    Real corollary_bound;
    bool corollary_holds = false;
};

template <typename F>
SubspaceAvoidanceResult<F> subspace_avoidance(const F& f, const SubspaceBasis<F>& s,
                                              const std::vector<SubspaceBasis<F>>& us,
                                              size_t sort_limit = 50000) {
    if (us.empty()) throw std::invalid_argument("no subspaces given");
    SubspaceAvoidanceResult<F> out;
    VarietyUnion<F> z;
    for (const auto& u : us) {
        if (u.N != s.N) throw std::invalid_argument("ambient dimension mismatch");
        if (u.L == u.N) throw VContainedInVariety();  // U = K^N contains V
        Mat<typename F::Elem> a = dual_form(f, u);
        // a row of the dual form not vanishing on V: exists iff V is not
        // inside U, since the rows span the annihilator of U
        std::optional<std::vector<typename F::Elem>> pick;
        for (const auto& row : a) {
            bool vanishes = true;
            for (size_t j = 0; j < s.L && vanishes; ++j) {
                typename F::Elem acc = f.zero();
                for (size_t i = 0; i < s.N; ++i) acc = acc + row[i] * s.X[i][j];
                vanishes = f.is_zero(acc);
            }
            if (!vanishes) {
                pick = row;
                break;
            }
        }
        if (!pick) throw VContainedInVariety();  // V inside U, hence inside the union
        out.forms.push_back(*pick);
        MultivariatePolynomial<F> lin = poly_zero(f, s.N);
        for (size_t i = 0; i < s.N; ++i)
            lin = poly_add(f, lin, poly_scale(f, (*pick)[i], poly_variable(f, s.N, i)));
        z.families.push_back({lin});
    }

    out.certificate = solve(f, s, z, sort_limit);

    FieldDescriptor fd = descriptor_of(f);
    if (fd.kind != FieldKind::function) {
        FieldInvariants inv = fd.invariants();
        long m = static_cast<long>(us.size());
        Real bound2 = sqrt(Real(2)) * Real(mpq_class(static_cast<long>(s.L))) *
                      Real(mpq_class(abs(mpz_class(inv.discriminant))))
                          .pow_rational(mpq_class(static_cast<long>(s.L) + 1, 2 * inv.degree)) *
                      Real(mpq_class(m)).pow_rational(mpq_class(1, inv.degree)) *
                      subspace_height(f, s);
        out.corollary_checked = true;
        out.corollary_bound = bound2;
        out.corollary_holds = certified_leq(out.certificate.point_height, bound2);
    }
    return out;
}

}  // namespace sgp
