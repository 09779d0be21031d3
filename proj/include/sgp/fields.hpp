#pragma once

// Exact arithmetic in the three supported ground fields: Q, Q(sqrt d) for
// squarefree d, and F_q(t) for prime q, plus the derived field invariants.

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgp/real.hpp"

namespace sgp {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat parse_rational(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

inline std::string rational_str(const Rat& q) { return q.get_str(); }

inline bool is_squarefree(long d) {
    long n = std::labs(d);
    if (n == 0) return false;
    for (long p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
    }
    return true;
}

inline bool is_prime(unsigned long q) {
    if (q < 2) return false;
    for (unsigned long p = 2; p * p <= q; ++p)
        if (q % p == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Quadratic field elements a + b*sqrt(d), d squarefree, != 0, 1.

struct Quad {
    Rat a, b;
    long d = 0;

    Quad() = default;
    Quad(Rat a_, Rat b_, long d_) : a(std::move(a_)), b(std::move(b_)), d(d_) {}

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    Quad conj() const { return Quad(a, -b, d); }
    Rat norm() const { return a * a - Rat(d) * b * b; }
    Rat trace() const { return 2 * a; }

    friend Quad operator+(const Quad& x, const Quad& y) {
        assert(x.d == y.d);
        return Quad(x.a + y.a, x.b + y.b, x.d);
    }
    friend Quad operator-(const Quad& x, const Quad& y) {
        assert(x.d == y.d);
        return Quad(x.a - y.a, x.b - y.b, x.d);
    }
    friend Quad operator-(const Quad& x) { return Quad(-x.a, -x.b, x.d); }
    friend Quad operator*(const Quad& x, const Quad& y) {
        assert(x.d == y.d);
        return Quad(x.a * y.a + Rat(x.d) * x.b * y.b, x.a * y.b + x.b * y.a, x.d);
    }
    Quad inverse() const {
        Rat n = norm();
        if (n == 0) throw std::domain_error("division by zero in quadratic field");
        return Quad(a / n, -b / n, d);
    }
    friend Quad operator/(const Quad& x, const Quad& y) { return x * y.inverse(); }
    friend bool operator==(const Quad& x, const Quad& y) { return x.d == y.d && x.a == y.a && x.b == y.b; }
};

// Sign of a + s*b*sqrt(d) at the real embedding s = +1 / -1 (requires d > 0),
// decided exactly by comparing squares.
inline int quad_embedding_sign(const Quad& x, int s) {
    assert(x.d > 1);
    Rat b = Rat(s) * x.b;
    if (b == 0) return sgn(x.a);
    if (x.a == 0) return sgn(b);
    if (x.a > 0 && b > 0) return 1;
    if (x.a < 0 && b < 0) return -1;
    // opposite signs: compare a^2 with d b^2
    int c = cmp(x.a * x.a, Rat(x.d) * b * b);
    if (c == 0) return 0;
    return (c > 0) ? sgn(x.a) : sgn(b);
}

// The real value a + s*b*sqrt(d) (d > 0) as a certified real.
inline Real quad_embedding_value(const Quad& x, int s) {
    return Real::surd(x.a, Rat(s) * x.b, x.d);
}

// |x|^2 at the complex place of an imaginary quadratic field: a^2 + |d| b^2.
inline Rat quad_cx_abs_sq(const Quad& x) {
    assert(x.d < 0);
    return x.a * x.a + Rat(-x.d) * x.b * x.b;
}

// ---------------------------------------------------------------------------
// F_q arithmetic and polynomials over F_q, coefficients stored low degree
// first with no trailing zeros.

struct FqPoly {
    unsigned q = 2;
    std::vector<unsigned> c;  // c[i] coefficient of t^i, values in [0, q)

    FqPoly() = default;
    FqPoly(unsigned q_, std::vector<unsigned> c_) : q(q_), c(std::move(c_)) { trim(); }
    static FqPoly constant(unsigned q, unsigned v) {
        FqPoly p;
        p.q = q;
        if (v % q) p.c = {v % q};
        return p;
    }
    static FqPoly t(unsigned q) { return FqPoly(q, {0, 1}); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int deg() const { return c.empty() ? -1 : static_cast<int>(c.size()) - 1; }
    unsigned lead() const { return c.empty() ? 0u : c.back(); }
    bool is_monic() const { return lead() == 1; }

    friend FqPoly operator+(const FqPoly& x, const FqPoly& y) {
        assert(x.q == y.q);
        FqPoly r;
        r.q = x.q;
        r.c.resize(std::max(x.c.size(), y.c.size()), 0);
        for (size_t i = 0; i < r.c.size(); ++i) {
            unsigned v = (i < x.c.size() ? x.c[i] : 0) + (i < y.c.size() ? y.c[i] : 0);
            r.c[i] = v % x.q;
        }
        r.trim();
        return r;
    }
    friend FqPoly operator-(const FqPoly& x, const FqPoly& y) {
        assert(x.q == y.q);
        FqPoly r;
        r.q = x.q;
        r.c.resize(std::max(x.c.size(), y.c.size()), 0);
        for (size_t i = 0; i < r.c.size(); ++i) {
            unsigned xv = i < x.c.size() ? x.c[i] : 0;
            unsigned yv = i < y.c.size() ? y.c[i] : 0;
            r.c[i] = (xv + x.q - yv) % x.q;
        }
        r.trim();
        return r;
    }
    friend FqPoly operator*(const FqPoly& x, const FqPoly& y) {
        assert(x.q == y.q);
        FqPoly r;
        r.q = x.q;
        if (x.is_zero() || y.is_zero()) return r;
        r.c.assign(x.c.size() + y.c.size() - 1, 0);
        for (size_t i = 0; i < x.c.size(); ++i)
            for (size_t j = 0; j < y.c.size(); ++j)
                r.c[i + j] = (r.c[i + j] + x.c[i] * y.c[j]) % x.q;
        r.trim();
        return r;
    }
    friend bool operator==(const FqPoly& x, const FqPoly& y) { return x.q == y.q && x.c == y.c; }

    FqPoly scaled(unsigned s) const {
        FqPoly r;
        r.q = q;
        s %= q;
        if (s == 0) return r;
        r.c = c;
        for (auto& v : r.c) v = (v * s) % q;
        return r;
    }
};

inline unsigned fq_inv(unsigned a, unsigned q) {
    a %= q;
    assert(a != 0);
    // q is a small prime
    for (unsigned x = 1; x < q; ++x)
        if ((a * x) % q == 1) return x;
    throw std::logic_error("no inverse");
}

inline void fq_divmod(const FqPoly& a, const FqPoly& b, FqPoly& quo, FqPoly& rem) {
    assert(a.q == b.q && !b.is_zero());
    unsigned q = a.q;
    rem = a;
    quo = FqPoly();
    quo.q = q;
    if (rem.deg() >= b.deg()) quo.c.assign(rem.deg() - b.deg() + 1, 0);
    unsigned binv = fq_inv(b.lead(), q);
    while (!rem.is_zero() && rem.deg() >= b.deg()) {
        int k = rem.deg() - b.deg();
        unsigned f = (rem.lead() * binv) % q;
        quo.c[k] = f;
        for (int i = 0; i <= b.deg(); ++i)
            rem.c[i + k] = (rem.c[i + k] + q - (f * b.c[i]) % q) % q;
        rem.trim();
    }
    quo.trim();
}

inline FqPoly fq_gcd(FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly quo, rem;
        fq_divmod(a, b, quo, rem);
        a = b;
        b = rem;
    }
    if (!a.is_zero() && !a.is_monic()) a = a.scaled(fq_inv(a.lead(), a.q));
    return a;
}

inline FqPoly fq_monic(const FqPoly& a) {
    if (a.is_zero() || a.is_monic()) return a;
    return a.scaled(fq_inv(a.lead(), a.q));
}

// Monic irreducible factors with multiplicities, by trial division over
// monic polynomials in degree order. Fine at the degrees we run.
inline std::vector<std::pair<FqPoly, int>> fq_factor(FqPoly f) {
    std::vector<std::pair<FqPoly, int>> out;
    if (f.deg() < 1) return out;
    f = fq_monic(f);
    unsigned q = f.q;
    for (int deg = 1; 2 * deg <= f.deg(); ++deg) {
        // enumerate monic polynomials of this degree; composite candidates
        // never divide because their smaller factors were removed first
        std::vector<unsigned> idx(deg, 0);
        for (;;) {
            std::vector<unsigned> coeffs(idx.begin(), idx.end());
            coeffs.push_back(1);
            FqPoly cand(q, std::move(coeffs));
            int mult = 0;
            for (;;) {
                FqPoly quo, rem;
                fq_divmod(f, cand, quo, rem);
                if (!rem.is_zero()) break;
                f = quo;
                ++mult;
            }
            if (mult) out.emplace_back(cand, mult);
            if (2 * deg > f.deg()) break;
            int i = 0;
            for (; i < deg; ++i) {
                if (++idx[i] < q) break;
                idx[i] = 0;
            }
            if (i == deg) break;
        }
    }
    if (f.deg() >= 1) out.emplace_back(f, 1);  // leftover is irreducible
    return out;
}

// Rational functions over F_q(t): num/den coprime, den monic.
struct FFElem {
    FqPoly num, den;

    FFElem() = default;
    FFElem(FqPoly n, FqPoly d) : num(std::move(n)), den(std::move(d)) { normalize(); }
    static FFElem from_poly(FqPoly p) {
        unsigned q = p.q;
        return FFElem(std::move(p), FqPoly::constant(q, 1));
    }
    static FFElem constant(unsigned q, unsigned v) { return from_poly(FqPoly::constant(q, v)); }

    unsigned q() const { return num.q; }
    bool is_zero() const { return num.is_zero(); }
    bool is_polynomial() const { return den.deg() == 0; }

    void normalize() {
        if (den.is_zero()) throw std::domain_error("zero denominator");
        assert(num.q == den.q);
        if (num.is_zero()) {
            den = FqPoly::constant(num.q, 1);
            return;
        }
        FqPoly g = fq_gcd(num, den);
        if (g.deg() > 0) {
            FqPoly quo, rem;
            fq_divmod(num, g, quo, rem);
            num = quo;
            fq_divmod(den, g, quo, rem);
            den = quo;
        }
        if (!den.is_monic()) {
            unsigned s = fq_inv(den.lead(), den.q);
            num = num.scaled(s);
            den = den.scaled(s);
        }
    }

    friend FFElem operator+(const FFElem& x, const FFElem& y) { return FFElem(x.num * y.den + y.num * x.den, x.den * y.den); }
    friend FFElem operator-(const FFElem& x, const FFElem& y) { return FFElem(x.num * y.den - y.num * x.den, x.den * y.den); }
    friend FFElem operator-(const FFElem& x) { return FFElem(FqPoly::constant(x.q(), 0) - x.num, x.den); }
    friend FFElem operator*(const FFElem& x, const FFElem& y) { return FFElem(x.num * y.num, x.den * y.den); }
    FFElem inverse() const {
        if (is_zero()) throw std::domain_error("division by zero in function field");
        return FFElem(den, num);
    }
    friend FFElem operator/(const FFElem& x, const FFElem& y) { return x * y.inverse(); }
    friend bool operator==(const FFElem& x, const FFElem& y) { return x.num == y.num && x.den == y.den; }
};

// Order of f at the infinite place (valuation of 1/t): deg den - deg num.
inline int ff_ord_infinity(const FFElem& f) {
    if (f.is_zero()) throw std::domain_error("ord of zero");
    return f.den.deg() - f.num.deg();
}

// Order of f at the finite place given by a monic irreducible pi.
inline int ff_ord_at(const FFElem& f, const FqPoly& pi) {
    if (f.is_zero()) throw std::domain_error("ord of zero");
    auto mult = [&](const FqPoly& p) {
        int m = 0;
        FqPoly cur = p;
        for (;;) {
            FqPoly quo, rem;
            fq_divmod(cur, pi, quo, rem);
            if (!rem.is_zero()) break;
            cur = quo;
            ++m;
        }
        return m;
    };
    return mult(f.num) - mult(f.den);
}

// ---------------------------------------------------------------------------
// Field contexts. Generic code is templated on these; elements carry enough
// context (d, q) that binary operators work directly.

struct RationalField {
    using Elem = Rat;
    Elem zero() const { return Rat(0); }
    Elem one() const { return Rat(1); }
    Elem from_int(long n) const { return Rat(n); }
    bool is_zero(const Elem& x) const { return x == 0; }
    Elem neg(const Elem& x) const { return -x; }
    Elem inv(const Elem& x) const {
        if (x == 0) throw std::domain_error("division by zero");
        return 1 / x;
    }
};

struct QuadraticField {
    long d;
    explicit QuadraticField(long d_) : d(d_) {
        if (d == 0 || d == 1 || !is_squarefree(d)) throw std::invalid_argument("d must be squarefree, not 0 or 1");
    }
    using Elem = Quad;
    Elem zero() const { return Quad(Rat(0), Rat(0), d); }
    Elem one() const { return Quad(Rat(1), Rat(0), d); }
    Elem from_int(long n) const { return Quad(Rat(n), Rat(0), d); }
    Elem from_parts(Rat a, Rat b) const { return Quad(std::move(a), std::move(b), d); }
    bool is_zero(const Elem& x) const { return x.is_zero(); }
    Elem neg(const Elem& x) const { return -x; }
    Elem inv(const Elem& x) const { return x.inverse(); }
    // omega generating O_K = Z[omega]
    bool half_integral_basis() const {
        long m = ((d % 4) + 4) % 4;
        return m == 1;
    }
};

struct FunctionField {
    unsigned q;
    explicit FunctionField(unsigned q_) : q(q_) {
        if (!is_prime(q)) throw std::invalid_argument("q must be prime");
    }
    using Elem = FFElem;
    Elem zero() const { return FFElem::constant(q, 0); }
    Elem one() const { return FFElem::constant(q, 1); }
    Elem from_int(long n) const {
        long v = n % static_cast<long>(q);
        if (v < 0) v += q;
        return FFElem::constant(q, static_cast<unsigned>(v));
    }
    bool is_zero(const Elem& x) const { return x.is_zero(); }
    Elem neg(const Elem& x) const { return -x; }
    Elem inv(const Elem& x) const { return x.inverse(); }
};

// ---------------------------------------------------------------------------
// Descriptor and invariants.

enum class FieldKind { rational, quadratic, function };

struct FieldInvariants {
    long degree = 1;        // d
    int r1 = 1, r2 = 0;     // embedding counts (number fields)
    long discriminant = 1;  // D_K
    int roots_of_unity = 2; // omega_K
    // function field data (genus 0 throughout)
    int genus = 0;
    int min_place_degree = 1;  // smallest degree of a finite place
    long effective_degree = 1;
    long rational_points = 0;  // n(K) = q + 1
    long class_number = 1;
    int delta = 1;  // 1 for number fields, 0 for function fields
};

struct FieldDescriptor {
    FieldKind kind = FieldKind::rational;
    long d = 0;      // quadratic parameter
    unsigned q = 0;  // function field characteristic

    static FieldDescriptor rational() { return {FieldKind::rational, 0, 0}; }
    static FieldDescriptor quadratic(long d) { return {FieldKind::quadratic, d, 0}; }
    static FieldDescriptor function(unsigned q) { return {FieldKind::function, 0, q}; }

    void validate() const {
        if (kind == FieldKind::quadratic) (void)QuadraticField{d};
        if (kind == FieldKind::function) (void)FunctionField{q};
    }

    FieldInvariants invariants() const {
        validate();
        FieldInvariants inv;
        switch (kind) {
            case FieldKind::rational:
                break;
            case FieldKind::quadratic: {
                inv.degree = 2;
                if (d > 0) {
                    inv.r1 = 2;
                    inv.r2 = 0;
                } else {
                    inv.r1 = 0;
                    inv.r2 = 1;
                }
                long m = ((d % 4) + 4) % 4;
                inv.discriminant = (m == 1) ? d : 4 * d;
                inv.roots_of_unity = (d == -1) ? 4 : (d == -3 ? 6 : 2);
                break;
            }
            case FieldKind::function:
                inv.degree = 1;
                inv.r1 = 0;
                inv.r2 = 0;
                inv.delta = 0;
                inv.rational_points = static_cast<long>(q) + 1;
                inv.class_number = 1;
                inv.genus = 0;
                inv.min_place_degree = 1;
                inv.effective_degree = 1;
                break;
        }
        return inv;
    }
};

// Dispatch a callable over the concrete field context.
template <typename Fn>
auto with_field(const FieldDescriptor& f, Fn&& fn) {
    switch (f.kind) {
        case FieldKind::rational:
            return fn(RationalField{});
        case FieldKind::quadratic:
            return fn(QuadraticField(f.d));
        case FieldKind::function:
            return fn(FunctionField(f.q));
    }
    throw std::logic_error("bad field kind");
}

inline FieldDescriptor descriptor_of(const RationalField&) { return FieldDescriptor::rational(); }
inline FieldDescriptor descriptor_of(const QuadraticField& f) { return FieldDescriptor::quadratic(f.d); }
inline FieldDescriptor descriptor_of(const FunctionField& f) { return FieldDescriptor::function(f.q); }

}  // namespace sgp
