#pragma once

// Field constants, Siegel-reduced bases over Q and F_q(t), post-hoc
// certification over quadratic fields, and the main bound assembly.

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgp/intlattice.hpp"
#include "sgp/subspace.hpp"

namespace sgp {

// ---------------------------------------------------------------------------
// Field constants.

struct FieldConstants {
    Real C;  // C_K(L)
    Real E;  // E_K(L), 1 at genus 0
    Real A;  // A_K(L,M)
    Real R;  // R_K(M), meaningful only in the finite-type branch of A
    int delta = 1;
};

inline FieldConstants constants(const FieldDescriptor& fd, long L, long M) {
    if (L < 1 || M < 1) throw std::invalid_argument("need L, M >= 1");
    FieldInvariants inv = fd.invariants();
    FieldConstants out;
    out.delta = inv.delta;
    out.R = Real(mpq_class(0));
    if (fd.kind != FieldKind::function) {
        long d = inv.degree;
        mpz_class absD = abs(mpz_class(inv.discriminant));
        Real base = Real(mpq_class(absD));
        for (int i = 0; i < inv.r2; ++i) base = base * (Real(2) / Real::pi());
        out.C = base.pow_rational(mpq_class(L, 2 * d));
        out.E = Real(mpq_class(1));
        if (inv.roots_of_unity <= M) {
            mpz_class inner = absD;
            inner <<= inv.r1;  // 2^{r1} |D|
            out.A = (Real(mpq_class(M)) * sqrt(Real(mpq_class(inner)))).pow_rational(mpq_class(1, d));
        } else {
            out.A = Real(mpq_class(1));
        }
    } else {
        // genus 0, effective degree 1: C = exp((g - 1 + m) L / m) = 1, E = 1
        out.C = Real(mpq_class(1));
        out.E = Real(mpq_class(1));
        long q = static_cast<long>(inv.rational_points) - 1;
        if (q <= M) {
            long n = inv.rational_points;
            long h = inv.class_number;
            Real root_n = sqrt(Real(mpq_class(n)));
            Real inner = Real(mpq_class((M - q + 2) * h)) * root_n;
            Real first = Real(mpq_class(n - 1, 2)) * nth_root(inner, static_cast<unsigned long>(n - 1));
            Real second = Real(mpq_class(h * (n - 1))) * root_n;
            out.R = first + second;
            out.A = out.R.is_exact() ? Real::exp_of_rational(out.R.exact_value()) : exp(out.R);
        } else {
            out.A = Real(mpq_class(1));
        }
    }
    return out;
}

// L^delta * E^(1-delta) * A * C * HV
inline Real main_bound(const FieldDescriptor& fd, long L, long M, const Real& hv) {
    FieldConstants c = constants(fd, L, M);
    Real head = c.delta ? Real(mpq_class(L)) : c.E;
    return head * c.A * c.C * hv;
}

// ---------------------------------------------------------------------------
// Siegel bases.

template <typename F>
struct SiegelBasis {
    std::vector<std::vector<typename F::Elem>> vectors;  // L vectors in K^N
    std::vector<Real> heights_H, heights_h;
    Real product_h;
    Real bound;  // C_K(L) * HV (number field) or E * C * HV (function field)
    bool certified = false;
    bool budget_exhausted = false;
    std::string note;
};

// --- rational case ----------------------------------------------------------

namespace detail {

// Saturated integer lattice basis (rows) of V cap Z^N.
inline IntMat rational_integral_basis(const SubspaceBasis<RationalField>& s) {
    IntMat rows;
    for (size_t j = 0; j < s.L; ++j) {
        std::vector<Rat> col(s.N);
        for (size_t i = 0; i < s.N; ++i) col[i] = s.X[i][j];
        rows.push_back(primitive_integer_vector(col));
    }
    return saturate_rows(rows);
}

inline mpz_class supnorm(const IntVec& v) {
    mpz_class m = 0;
    for (const auto& c : v) m = std::max(m, mpz_class(abs(c)));
    return m;
}

inline bool lex_less(const IntVec& a, const IntVec& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

}  // namespace detail

inline SiegelBasis<RationalField> siegel_basis_rational(const RationalField& f,
                                                        const SubspaceBasis<RationalField>& s,
                                                        long budget = 10000000) {
    SiegelBasis<RationalField> out;
    Real hv = subspace_height(f, s);
    out.bound = hv;  // C_Q(L) = 1

    IntMat lat = detail::rational_integral_basis(s);
    // any certified basis has H(u_i) = supnorm(u_i) <= HV, since each H >= 1;
    // HV^2 is an integer: the square norm of the primitive Grassmann vector
    auto gr = primitive_integer_vector(grassmann(f, s));
    mpz_class hv2q = 0;
    for (const auto& g : gr) hv2q += g * g;
    mpz_class radius;
    mpz_sqrt(radius.get_mpz_t(), hv2q.get_mpz_t());

    if (radius < 1) radius = 1;

    // radius doubling: at the first radius admitting L independent lattice
    // vectors, the greedy sweep below realizes the successive minima, and
    // their product is at most the lattice covolume HV
    IntMat chosen;
    for (mpz_class r = 1;; r *= 2) {
        if (r > radius) r = radius;
        std::vector<IntVec> pts;
        try {
            pts = enumerate_supnorm(lat, mpq_class(r), budget);
        } catch (const std::runtime_error&) {
            out.budget_exhausted = true;
            out.note = "budget exhausted";
            return out;
        }
        // canonical sign, drop zero, sort by (supnorm, lex)
        std::vector<IntVec> cands;
        for (auto& v : pts) {
            size_t i = 0;
            while (i < v.size() && v[i] == 0) ++i;
            if (i == v.size()) continue;
            if (v[i] < 0)
                for (auto& c : v) c = -c;
            cands.push_back(std::move(v));
        }
        std::sort(cands.begin(), cands.end(), [](const IntVec& a, const IntVec& b) {
            mpz_class sa = detail::supnorm(a), sb = detail::supnorm(b);
            if (sa != sb) return sa < sb;
            return detail::lex_less(a, b);
        });
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

        // greedy successive-minima extraction
        chosen.clear();
        for (const auto& v : cands) {
            if (chosen.size() == s.L) break;
            IntMat trial = chosen;
            trial.push_back(v);
            IntMat h = hnf_rows(trial);
            if (h.size() == trial.size()) chosen = std::move(trial);
        }
        if (chosen.size() == s.L || r == radius) break;
    }
    if (chosen.size() != s.L) {
        out.budget_exhausted = true;
        out.note = "no spanning set within radius";
        return out;
    }

    mpz_class prod = 1;
    for (const auto& v : chosen) {
        std::vector<Rat> x(v.begin(), v.end());
        out.vectors.push_back(x);
        Real H = height_H(f, x);
        out.heights_H.push_back(H);
        out.heights_h.push_back(height_h(f, x));
        prod *= detail::supnorm(v);
    }
    out.product_h = Real(mpq_class(prod));
    // exact comparison of squares: prod^2 <= HV^2
    out.certified = prod * prod <= hv2q;
    if (!out.certified) out.note = "greedy basis exceeded the bound";
    return out;
}

// --- function field case ----------------------------------------------------

namespace detail {

using FqMat = std::vector<std::vector<FqPoly>>;

// Row Hermite form over F_q[t]: unimodular row operations, monic pivots,
// entries above each pivot of smaller degree. Zero rows are dropped.
inline FqMat fq_hnf_rows(FqMat a, unsigned q) {
    size_t r = a.size(), c = r ? a[0].size() : 0;
    size_t piv_row = 0;
    for (size_t col = 0; col < c && piv_row < r; ++col) {
        for (size_t i = piv_row + 1; i < r; ++i) {
            while (!a[i][col].is_zero()) {
                if (a[piv_row][col].is_zero()) {
                    std::swap(a[piv_row], a[i]);
                    continue;
                }
                FqPoly quo, rem;
                fq_divmod(a[i][col], a[piv_row][col], quo, rem);
                for (size_t j = 0; j < c; ++j) a[i][j] = a[i][j] - quo * a[piv_row][j];
                if (!a[i][col].is_zero()) std::swap(a[piv_row], a[i]);
            }
        }
        if (a[piv_row][col].is_zero()) continue;
        FqPoly u = FqPoly::constant(q, fq_inv(a[piv_row][col].lead(), q));
        for (size_t j = 0; j < c; ++j) a[piv_row][j] = u * a[piv_row][j];
        for (size_t i = 0; i < piv_row; ++i) {
            if (a[i][col].deg() < a[piv_row][col].deg()) continue;
            FqPoly quo, rem;
            fq_divmod(a[i][col], a[piv_row][col], quo, rem);
            for (size_t j = 0; j < c; ++j) a[i][j] = a[i][j] - quo * a[piv_row][j];
        }
        ++piv_row;
    }
    a.resize(piv_row);
    return a;
}

// Basis (rows) of { x in F_q[t]^c : A x = 0 }; saturated since F_q[t] is a
// PID and the construction is by unimodular column transform.
inline FqMat fq_kernel(const FqMat& a, unsigned q) {
    size_t r = a.size(), c = r ? a[0].size() : 0;
    FqMat m(c, std::vector<FqPoly>(r, FqPoly::constant(q, 0)));
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m[j][i] = a[i][j];
    FqMat u(c, std::vector<FqPoly>(c, FqPoly::constant(q, 0)));
    for (size_t i = 0; i < c; ++i) u[i][i] = FqPoly::constant(q, 1);

    size_t piv = 0;
    for (size_t col = 0; col < r && piv < c; ++col) {
        for (size_t i = piv + 1; i < c; ++i) {
            while (!m[i][col].is_zero()) {
                if (m[piv][col].is_zero()) {
                    std::swap(m[piv], m[i]);
                    std::swap(u[piv], u[i]);
                    continue;
                }
                FqPoly quo, rem;
                fq_divmod(m[i][col], m[piv][col], quo, rem);
                for (size_t j = 0; j < r; ++j) m[i][j] = m[i][j] - quo * m[piv][j];
                for (size_t j = 0; j < c; ++j) u[i][j] = u[i][j] - quo * u[piv][j];
                if (!m[i][col].is_zero()) {
                    std::swap(m[piv], m[i]);
                    std::swap(u[piv], u[i]);
                }
            }
        }
        if (!m[piv][col].is_zero()) ++piv;
    }
    FqMat ker;
    for (size_t i = piv; i < c; ++i) {
        bool zero = true;
        for (size_t j = 0; j < r; ++j) zero = zero && m[i][j].is_zero();
        if (zero) ker.push_back(u[i]);
    }
    return fq_hnf_rows(std::move(ker), q);
}

// Basis of span_K(rows) intersected with F_q[t]^c (kernel of kernel).
inline FqMat fq_saturate_rows(const FqMat& a, unsigned q) {
    FqMat ker = fq_kernel(a, q);
    if (ker.empty()) {
        size_t c = a.empty() ? 0 : a[0].size();
        FqMat id(c, std::vector<FqPoly>(c, FqPoly::constant(q, 0)));
        for (size_t i = 0; i < c; ++i) id[i][i] = FqPoly::constant(q, 1);
        return id;
    }
    return fq_kernel(ker, q);
}

inline int col_deg(const std::vector<FqPoly>& col) {
    int d = -1;
    for (const auto& p : col) d = std::max(d, p.deg());
    return d;
}

// row index of the pivot: the largest row attaining the column degree
inline size_t col_pivot(const std::vector<FqPoly>& col) {
    int d = col_deg(col);
    size_t piv = 0;
    for (size_t i = 0; i < col.size(); ++i)
        if (col[i].deg() == d) piv = i;
    return piv;
}

inline void content_normalize(std::vector<FqPoly>& col) {
    FqPoly content;
    content.q = col.empty() ? 2 : col[0].q;
    for (const auto& p : col) content = fq_gcd(content, p);
    if (content.is_zero() || content.deg() == 0) {
        // still normalize the leading pivot coefficient to 1 for determinism
        return;
    }
    for (auto& p : col) {
        FqPoly quo, rem;
        fq_divmod(p, content, quo, rem);
        p = quo;
    }
}

}  // namespace detail

inline SiegelBasis<FunctionField> siegel_basis_function_field(const FunctionField& f,
                                                              const SubspaceBasis<FunctionField>& s) {
    SiegelBasis<FunctionField> out;
    Real hv = subspace_height(f, s);
    out.bound = hv;  // E * C * HV = HV at genus 0

    // polynomial generators, then a basis of the saturated module
    // V cap F_q[t]^N: heights of a reduced basis of the saturated module
    // certify against HV, generators of a proper submodule need not
    detail::FqMat gens(s.L);
    for (size_t j = 0; j < s.L; ++j) {
        std::vector<FFElem> col(s.N);
        for (size_t i = 0; i < s.N; ++i) col[i] = s.X[i][j];
        gens[j] = primitive_polynomial_vector(col);
    }
    detail::FqMat cols = detail::fq_saturate_rows(gens, f.q);
    if (cols.size() != s.L) throw std::logic_error("saturation rank mismatch");

    // weak-Popov style column reduction: while two columns share a pivot
    // row, cancel the leading term of the worse column with the better one
    for (;;) {
        bool reduced = false;
        for (size_t a = 0; a < cols.size() && !reduced; ++a) {
            for (size_t b = 0; b < cols.size() && !reduced; ++b) {
                if (a == b) continue;
                size_t pa = detail::col_pivot(cols[a]), pb = detail::col_pivot(cols[b]);
                int da = detail::col_deg(cols[a]), db = detail::col_deg(cols[b]);
                if (pa != pb || da > db) continue;
                // reduce column b by column a (a is the lower column index
                // on ties because of the loop order)
                unsigned lead_a = cols[a][pa].lead();
                unsigned lead_b = cols[b][pb].lead();
                unsigned c = (static_cast<unsigned long>(lead_b) * fq_inv(lead_a, f.q)) % f.q;
                int shift = db - da;
                std::vector<unsigned> mono(static_cast<size_t>(shift) + 1, 0);
                mono[static_cast<size_t>(shift)] = c;
                FqPoly m(f.q, mono);
                bool changed = false;
                for (size_t i = 0; i < cols[b].size(); ++i) {
                    FqPoly delta = m * cols[a][i];
                    if (!delta.is_zero()) changed = true;
                    cols[b][i] = cols[b][i] - delta;
                }
                if (!changed) continue;
                detail::content_normalize(cols[b]);
                if (detail::col_deg(cols[b]) < 0)
                    throw std::logic_error("column collapsed to zero during reduction");
                reduced = true;
            }
        }
        if (!reduced) break;
    }

    long expsum = 0;
    for (const auto& col : cols) {
        std::vector<FFElem> x(s.N);
        for (size_t i = 0; i < s.N; ++i) x[i] = FFElem::from_poly(col[i]);
        out.vectors.push_back(x);
        Real H = height_H(f, x);
        out.heights_H.push_back(H);
        out.heights_h.push_back(height_h(f, x));
        expsum += detail::col_deg(col);
    }
    out.product_h = Real::exp_of_rational(mpq_class(expsum));
    // integer exponent comparison
    out.certified = mpq_class(expsum) <= hv.exact_log_value();
    if (!out.certified) out.note = "reduced basis exceeded the bound";
    return out;
}

// --- quadratic case ---------------------------------------------------------

inline SiegelBasis<QuadraticField> siegel_certify_quadratic(const QuadraticField& f,
                                                            const SubspaceBasis<QuadraticField>& s,
                                                            long coeff_box = 2, long budget = 200000) {
    SiegelBasis<QuadraticField> out;
    Real hv = subspace_height(f, s);
    FieldConstants c = constants(descriptor_of(f), static_cast<long>(s.L), 1);
    out.bound = c.C * hv;

    // Z-basis of the saturated module V cap O_K^N: in coordinates with
    // respect to the integral basis (1, omega), the module is the Z-lattice
    // saturation of the span of {x_j, omega x_j}; the given columns alone
    // can generate a proper submodule and miss every short vector
    Quad omega = f.half_integral_basis() ? Quad(Rat(1, 2), Rat(1, 2), f.d)
                                         : Quad(Rat(0), Rat(1), f.d);
    IntMat rows;
    for (size_t j = 0; j < s.L; ++j) {
        std::vector<Quad> col(s.N, Quad(Rat(0), Rat(0), f.d));
        for (size_t i = 0; i < s.N; ++i) col[i] = s.X[i][j];
        mpz_class den = 1;
        for (const auto& x : col) {
            auto [u, v] = quad_integral_coords(f, x);
            den = int_lcm(den, u.get_den());
            den = int_lcm(den, v.get_den());
        }
        for (auto& x : col) x = Quad(Rat(mpq_class(den)), Rat(0), f.d) * x;
        for (const Quad& mult : {Quad(Rat(1), Rat(0), f.d), omega}) {
            IntVec row(2 * s.N);
            for (size_t i = 0; i < s.N; ++i) {
                auto [u, v] = quad_integral_coords(f, mult * col[i]);
                row[2 * i] = mpz_class(u.get_num());
                row[2 * i + 1] = mpz_class(v.get_num());
            }
            rows.push_back(std::move(row));
        }
    }
    IntMat zbasis = saturate_rows(rows);
    if (zbasis.size() != 2 * s.L) throw std::logic_error("saturation rank mismatch");
    std::vector<std::vector<Quad>> gens;
    for (const auto& row : zbasis) {
        std::vector<Quad> g(s.N, Quad(Rat(0), Rat(0), f.d));
        for (size_t i = 0; i < s.N; ++i)
            g[i] = Quad(Rat(mpq_class(row[2 * i])), Rat(0), f.d) +
                   Quad(Rat(mpq_class(row[2 * i + 1])), Rat(0), f.d) * omega;
        gens.push_back(std::move(g));
    }

    // candidate generation: Z-combinations of the saturated basis with
    // coefficients in a box
    std::vector<std::vector<Quad>> cands;
    long used = 0;
    std::vector<long> coef(2 * s.L, 0);
    bool exhausted = false;
    std::function<void(size_t)> rec = [&](size_t pos) {
        if (exhausted) return;
        if (pos == coef.size()) {
            if (++used > budget) {
                exhausted = true;
                return;
            }
            std::vector<Quad> w(s.N, Quad(Rat(0), Rat(0), f.d));
            bool zero = true;
            for (size_t j = 0; j < coef.size(); ++j) {
                if (coef[j] == 0) continue;
                zero = false;
                Quad c{Rat(coef[j]), Rat(0), f.d};
                for (size_t i = 0; i < s.N; ++i) w[i] = w[i] + c * gens[j][i];
            }
            if (!zero) cands.push_back(std::move(w));
            return;
        }
        for (long v = -coeff_box; v <= coeff_box; ++v) {
            coef[pos] = v;
            rec(pos + 1);
        }
    };
    rec(0);
    if (exhausted) {
        out.budget_exhausted = true;
        out.note = "budget exhausted";
        return out;
    }

    // saturation sweep: a combination of the given columns can be divisible
    // by a non-unit of O_K, and the quotient lies in V cap O_K^N too; strip
    // small-norm divisors and add the quotients as extra candidates
    auto integral = [&](const Quad& x) {
        auto [u, v] = quad_integral_coords(f, x);
        return u.get_den() == 1 && v.get_den() == 1;
    };
    size_t generated = cands.size();
    for (size_t ci = 0; ci < generated; ++ci) {
        // a common divisor delta has N(delta) dividing every coordinate norm,
        // so coprime norms rule the sweep out immediately
        mpz_class ng = 0;
        for (const auto& x : cands[ci]) {
            mpq_class n = abs(mpq_class(x.norm()));
            mpz_gcd(ng.get_mpz_t(), ng.get_mpz_t(), mpz_class(n.get_num()).get_mpz_t());
        }
        if (ng <= 1) continue;
        std::vector<Quad> w = cands[ci];
        bool progress = true, stripped = false;
        while (progress) {
            progress = false;
            for (long a = -3; a <= 3 && !progress; ++a)
                for (long b = -3; b <= 3 && !progress; ++b) {
                    Quad delta = Quad(Rat(a), Rat(0), f.d) + Quad(Rat(b), Rat(0), f.d) * omega;
                    if (delta.is_zero() || abs(mpq_class(delta.norm())) < 2) continue;
                    Quad dinv = delta.inverse();
                    std::vector<Quad> quo(w.size(), Quad(Rat(0), Rat(0), f.d));
                    bool ok = true;
                    for (size_t i = 0; i < w.size() && ok; ++i) {
                        quo[i] = w[i] * dinv;
                        ok = integral(quo[i]);
                    }
                    if (ok) {
                        w = std::move(quo);
                        progress = true;
                        stripped = true;
                    }
                }
        }
        if (stripped) cands.push_back(std::move(w));
    }

    // sort candidates by height h, exactly where possible
    std::vector<std::pair<Real, size_t>> order;
    for (size_t i = 0; i < cands.size(); ++i) order.emplace_back(height_h(f, cands[i]), i);
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        try {
            return certified_compare(a.first, b.first) == Cmp::less;
        } catch (const UnresolvedComparison&) {
            return false;  // ties keep input order
        }
    });

    // greedy rank-increasing extraction, then certification
    Mat<Quad> picked;  // rows = chosen vectors
    std::vector<size_t> idx;
    for (const auto& [h, i] : order) {
        if (idx.size() == s.L) break;
        Mat<Quad> trial = picked;
        trial.push_back(cands[i]);
        if (mat_rank(f, trial) == trial.size()) {
            picked = std::move(trial);
            idx.push_back(i);
        }
    }
    if (idx.size() != s.L) {
        out.budget_exhausted = true;
        out.note = "no spanning set in coefficient box";
        return out;
    }

    Real prod(mpq_class(1));
    for (size_t i : idx) {
        out.vectors.push_back(cands[i]);
        out.heights_H.push_back(height_H(f, cands[i]));
        Real h = height_h(f, cands[i]);
        out.heights_h.push_back(h);
        prod = prod * h;
    }
    out.product_h = prod;
    try {
        out.certified = certified_leq(prod, out.bound);
    } catch (const UnresolvedComparison&) {
        out.certified = false;
        out.note = "comparison unresolved";
        return out;
    }
    if (!out.certified) {
        out.budget_exhausted = true;  // not a disproof: the box was too small
        out.note = "no certified basis found within the coefficient box";
    }
    return out;
}

}  // namespace sgp
