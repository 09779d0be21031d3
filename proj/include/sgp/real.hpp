#pragma once

// Certified real values: exact rationals, exact exponentials e^t with
// rational t, and lazily refined dyadic enclosures for everything else.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace sgp {

struct UnresolvedComparison : std::runtime_error {
    UnresolvedComparison() : std::runtime_error("certified comparison unresolved at precision cap") {}
    explicit UnresolvedComparison(const std::string& what) : std::runtime_error(what) {}
};

enum class Cmp { less, equal, greater };

// Closed interval with rational endpoints.
struct Ival {
    mpq_class lo, hi;
    mpq_class width() const { return hi - lo; }
};

namespace detail {

inline mpq_class mpfr_to_q(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return mpq_class(0);
    mpq_t q;
    mpq_init(q);
    mpfr_get_q(q, x);
    mpq_class out(q);
    mpq_clear(q);
    return out;
}

// Apply an mpfr function to a rational argument, returning a two-sided
// enclosure at the given precision.
template <typename F>
Ival mpfr_enclose(const mpq_class& arg, long prec, F&& fn) {
    mpfr_t a, lo, hi;
    mpfr_init2(a, static_cast<mpfr_prec_t>(prec + 8));
    mpfr_init2(lo, static_cast<mpfr_prec_t>(prec));
    mpfr_init2(hi, static_cast<mpfr_prec_t>(prec));
    mpfr_set_q(a, arg.get_mpq_t(), MPFR_RNDD);
    fn(lo, a, MPFR_RNDD);
    mpfr_set_q(a, arg.get_mpq_t(), MPFR_RNDU);
    fn(hi, a, MPFR_RNDU);
    Ival out{mpfr_to_q(lo), mpfr_to_q(hi)};
    mpfr_clears(a, lo, hi, nullptr);
    return out;
}

inline bool perfect_root(const mpz_class& n, unsigned long k, mpz_class& root) {
    if (n < 0) return false;
    mpz_class r;
    int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    if (exact) {
        root = r;
        return true;
    }
    return false;
}

// Exact k-th root of a nonnegative rational, if it is one.
inline std::optional<mpq_class> rational_root(const mpq_class& q, unsigned long k) {
    if (q < 0) return std::nullopt;
    mpz_class rn, rd;
    if (!perfect_root(mpz_class(q.get_num()), k, rn)) return std::nullopt;
    if (!perfect_root(mpz_class(q.get_den()), k, rd)) return std::nullopt;
    return mpq_class(rn, rd);
}

inline mpq_class qpow(const mpq_class& q, unsigned long e) {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q.get_num().get_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), q.get_den().get_mpz_t(), e);
    return mpq_class(n, d);  // canonical since q is
}

inline unsigned long ulcm(unsigned long a, unsigned long b) {
    mpz_class l;
    mpz_lcm_ui(l.get_mpz_t(), mpz_class(static_cast<long>(a)).get_mpz_t(), b);
    return mpz_get_ui(l.get_mpz_t());
}

// Exactly representable algebraic base a + b*sqrt(d), rational when b = 0.
struct RootBase {
    mpq_class a, b;
    long d = 0;
    bool rational() const { return b == 0 || d == 0; }
};

inline int rb_sign(const RootBase& x) {
    if (x.rational()) return sgn(x.a);
    if (x.a == 0) return sgn(x.b);
    if (x.a > 0 && x.b > 0) return 1;
    if (x.a < 0 && x.b < 0) return -1;
    int c = cmp(x.a * x.a, mpq_class(x.d) * x.b * x.b);
    if (c == 0) return 0;
    return c > 0 ? sgn(x.a) : sgn(x.b);
}

inline std::optional<RootBase> rb_mul(const RootBase& x, const RootBase& y) {
    if (x.rational()) return RootBase{x.a * y.a, x.a * y.b, y.d};
    if (y.rational()) return RootBase{y.a * x.a, y.a * x.b, x.d};
    if (x.d != y.d) return std::nullopt;
    mpq_class dd(x.d);
    return RootBase{x.a * y.a + dd * x.b * y.b, x.a * y.b + x.b * y.a, x.d};
}

inline std::optional<RootBase> rb_add(const RootBase& x, const RootBase& y) {
    if (x.rational()) return RootBase{x.a + y.a, y.b, y.d};
    if (y.rational()) return RootBase{x.a + y.a, x.b, x.d};
    if (x.d != y.d) return std::nullopt;
    return RootBase{x.a + y.a, x.b + y.b, x.d};
}

inline std::optional<RootBase> rb_inv(const RootBase& x) {
    if (x.rational()) {
        if (x.a == 0) return std::nullopt;
        return RootBase{mpq_class(1) / x.a, mpq_class(0), 0};
    }
    mpq_class n = x.a * x.a - mpq_class(x.d) * x.b * x.b;
    if (n == 0) return std::nullopt;  // cannot happen for squarefree d, kept defensive
    return RootBase{x.a / n, -x.b / n, x.d};
}

inline RootBase rb_pow(const RootBase& x, unsigned long e) {
    RootBase acc{mpq_class(1), mpq_class(0), 0};
    RootBase base = x;
    while (e) {
        if (e & 1) acc = *rb_mul(acc, base);
        base = *rb_mul(base, base);
        e >>= 1;
    }
    return acc;
}

// Sign of x - y, when both live in one quadratic extension.
inline std::optional<int> rb_cmp(const RootBase& x, const RootBase& y) {
    long d = x.rational() ? y.d : x.d;
    if (!x.rational() && !y.rational() && x.d != y.d) return std::nullopt;
    return rb_sign(RootBase{x.a - y.a, x.b - y.b, d});
}

using RootForm = std::pair<RootBase, unsigned long>;  // value = base^(1/k)

// Exact comparison of base1^(1/k1) with base2^(1/k2); bases with k > 1 are
// nonnegative by construction.
inline std::optional<int> root_compare(const RootForm& x, const RootForm& y) {
    int s1 = rb_sign(x.first), s2 = rb_sign(y.first);
    if (s1 < 0 && s2 >= 0) return -1;
    if (s1 >= 0 && s2 < 0) return 1;
    if (s1 < 0 && s2 < 0) return rb_cmp(x.first, y.first);  // both k = 1
    unsigned long l = ulcm(x.second, y.second);
    return rb_cmp(rb_pow(x.first, l / x.second), rb_pow(y.first, l / y.second));
}

}  // namespace detail

class Real {
public:
    using Evaluator = std::function<Ival(long prec)>;

    Real() : Real(mpq_class(0)) {}

    /* implicit */ Real(const mpq_class& q)
        : exact_(q), ev_([q](long) { return Ival{q, q}; }) {}
    /* implicit */ Real(long n) : Real(mpq_class(n)) {}

    static Real from_evaluator(Evaluator ev) {
        Real r(std::move(ev), std::nullopt, std::nullopt);
        return r;
    }

    // e^t for rational t, kept in exact log form.
    static Real exp_of_rational(const mpq_class& t) {
        Real r([t](long prec) { return detail::mpfr_enclose(t, prec, [](mpfr_ptr o, mpfr_srcptr a, mpfr_rnd_t m) { mpfr_exp(o, a, m); }); },
               t == 0 ? std::optional<mpq_class>(mpq_class(1)) : std::nullopt, t);
        return r;
    }

    // The real number a + b*sqrt(d) for rational a, b and squarefree d > 1,
    // carried in exact algebraic form.
    static Real surd(const mpq_class& a, const mpq_class& b, long d) {
        if (b == 0) return Real(a);
        if (d >= 0) {
            mpz_class dz(d);
            if (mpz_perfect_square_p(dz.get_mpz_t())) {
                mpz_class s;
                mpz_sqrt(s.get_mpz_t(), dz.get_mpz_t());
                return Real(mpq_class(a + b * s));
            }
        }
        Real r = from_evaluator([a, b, d](long prec) {
            Ival s = detail::mpfr_enclose(mpq_class(d), prec, [](mpfr_ptr o, mpfr_srcptr v, mpfr_rnd_t m) { mpfr_sqrt(o, v, m); });
            Ival bs = b > 0 ? Ival{b * s.lo, b * s.hi} : Ival{b * s.hi, b * s.lo};
            return Ival{a + bs.lo, a + bs.hi};
        });
        // k = 1 root forms may be negative; abs and comparisons handle signs
        r.exact_root_ = std::make_pair(detail::RootBase{a, b, d}, 1ul);
        return r;
    }

    static Real pi() {
        return from_evaluator([](long prec) {
            mpfr_t lo, hi;
            mpfr_init2(lo, static_cast<mpfr_prec_t>(prec));
            mpfr_init2(hi, static_cast<mpfr_prec_t>(prec));
            mpfr_const_pi(lo, MPFR_RNDD);
            mpfr_const_pi(hi, MPFR_RNDU);
            Ival out{detail::mpfr_to_q(lo), detail::mpfr_to_q(hi)};
            mpfr_clears(lo, hi, nullptr);
            return out;
        });
    }

    bool is_exact() const { return exact_.has_value(); }
    bool is_exact_log() const { return exact_log_.has_value(); }
    const mpq_class& exact_value() const { return *exact_; }
    const mpq_class& exact_log_value() const { return *exact_log_; }

    Ival enclose(long prec) const { return ev_(prec); }

    // Human-readable exact form, when one is tracked: a rational, e^(q), or
    // a k-th root of a + b*sqrt(d).
    std::optional<std::string> symbolic() const {
        if (exact_) return exact_->get_str();
        if (exact_log_) return "e^(" + exact_log_->get_str() + ")";
        if (exact_root_) {
            const auto& [base, k] = *exact_root_;
            std::string b;
            if (base.rational()) {
                b = base.a.get_str();
            } else {
                b = "(" + base.a.get_str() + (base.b >= 0 ? "+" : "") + base.b.get_str() +
                    "*sqrt(" + std::to_string(base.d) + "))";
            }
            if (k == 1) return b;
            return b + "^(1/" + std::to_string(k) + ")";
        }
        return std::nullopt;
    }

    friend Real operator+(const Real& a, const Real& b) {
        std::optional<mpq_class> ex;
        if (a.exact_ && b.exact_) ex = *a.exact_ + *b.exact_;
        std::optional<detail::RootForm> root;
        if (!ex && a.root_form() && b.root_form()) {
            auto [b1, k1] = *a.root_form();
            auto [b2, k2] = *b.root_form();
            // k = 1 surds in a common field are closed under addition
            if (k1 == 1 && k2 == 1) {
                auto sum = detail::rb_add(b1, b2);
                if (sum) root = std::make_pair(*sum, 1ul);
            }
        }
        auto ae = a.ev_, be = b.ev_;
        Real out = Real([ae, be](long p) {
            Ival x = ae(p), y = be(p);
            return Ival{x.lo + y.lo, x.hi + y.hi};
        }, ex, std::nullopt);
        out.exact_root_ = root;
        return out;
    }

    friend Real operator-(const Real& a, const Real& b) {
        std::optional<mpq_class> ex;
        if (a.exact_ && b.exact_) ex = *a.exact_ - *b.exact_;
        std::optional<detail::RootForm> root;
        if (!ex && a.root_form() && b.root_form()) {
            auto [b1, k1] = *a.root_form();
            auto [b2, k2] = *b.root_form();
            if (k1 == 1 && k2 == 1) {
                auto diff = detail::rb_add(b1, detail::RootBase{-b2.a, -b2.b, b2.d});
                if (diff) root = std::make_pair(*diff, 1ul);
            }
        }
        auto ae = a.ev_, be = b.ev_;
        Real out = Real([ae, be](long p) {
            Ival x = ae(p), y = be(p);
            return Ival{x.lo - y.hi, x.hi - y.lo};
        }, ex, std::nullopt);
        out.exact_root_ = root;
        return out;
    }

    friend Real operator*(const Real& a, const Real& b) {
        std::optional<mpq_class> ex;
        std::optional<mpq_class> exlog;
        if (a.exact_ && b.exact_) ex = *a.exact_ * *b.exact_;
        if (a.log_form() && b.log_form()) exlog = *a.log_form() + *b.log_form();
        std::optional<detail::RootForm> root;
        if (!ex && a.root_form() && b.root_form()) {
            auto [b1, k1] = *a.root_form();
            auto [b2, k2] = *b.root_form();
            if (detail::rb_sign(b1) >= 0 && detail::rb_sign(b2) >= 0) {
                unsigned long l = detail::ulcm(k1, k2);
                auto prod = detail::rb_mul(detail::rb_pow(b1, l / k1), detail::rb_pow(b2, l / k2));
                if (prod) root = std::make_pair(*prod, l);
            }
        }
        auto ae = a.ev_, be = b.ev_;
        Real out = Real([ae, be](long p) {
            Ival x = ae(p), y = be(p);
            mpq_class c[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
            mpq_class lo = c[0], hi = c[0];
            for (int i = 1; i < 4; ++i) {
                if (c[i] < lo) lo = c[i];
                if (c[i] > hi) hi = c[i];
            }
            return Ival{lo, hi};
        }, ex, exlog);
        out.exact_root_ = root;
        return out;
    }

    friend Real operator/(const Real& a, const Real& b) {
        std::optional<mpq_class> ex;
        std::optional<mpq_class> exlog;
        if (b.exact_ && *b.exact_ == 0) throw std::domain_error("division by zero");
        if (a.exact_ && b.exact_) ex = *a.exact_ / *b.exact_;
        if (a.log_form() && b.log_form()) exlog = *a.log_form() - *b.log_form();
        std::optional<detail::RootForm> root;
        if (!ex && a.root_form() && b.root_form()) {
            auto [b1, k1] = *a.root_form();
            auto [b2, k2] = *b.root_form();
            if (detail::rb_sign(b1) >= 0 && detail::rb_sign(b2) > 0) {
                unsigned long l = detail::ulcm(k1, k2);
                auto inv = detail::rb_inv(detail::rb_pow(b2, l / k2));
                auto quot = inv ? detail::rb_mul(detail::rb_pow(b1, l / k1), *inv) : std::nullopt;
                if (quot) root = std::make_pair(*quot, l);
            }
        }
        auto ae = a.ev_, be = b.ev_;
        Real out = Real([ae, be](long p) {
            Ival y = be(p);
            long pp = p;
            while ((y.lo <= 0 && y.hi >= 0) && pp < kPrecCap) {
                pp *= 2;
                y = be(pp);
            }
            if (y.lo <= 0 && y.hi >= 0) throw UnresolvedComparison("divisor interval contains zero");
            Ival x = ae(p);
            mpq_class c[4] = {x.lo / y.lo, x.lo / y.hi, x.hi / y.lo, x.hi / y.hi};
            mpq_class lo = c[0], hi = c[0];
            for (int i = 1; i < 4; ++i) {
                if (c[i] < lo) lo = c[i];
                if (c[i] > hi) hi = c[i];
            }
            return Ival{lo, hi};
        }, ex, exlog);
        out.exact_root_ = root;
        return out;
    }

    friend Real abs(const Real& a) {
        std::optional<mpq_class> ex;
        if (a.exact_) ex = abs(*a.exact_);
        auto ae = a.ev_;
        Real out = Real([ae](long p) {
            Ival x = ae(p);
            if (x.lo >= 0) return x;
            if (x.hi <= 0) return Ival{-x.hi, -x.lo};
            mpq_class hi = std::max(mpq_class(-x.lo), x.hi);
            return Ival{mpq_class(0), hi};
        }, ex, a.exact_log_);
        out.exact_root_ = a.exact_root_;
        if (a.exact_root_ && detail::rb_sign(a.exact_root_->first) < 0)  // k = 1 surd below zero
            out.exact_root_ = std::make_pair(detail::RootBase{-a.exact_root_->first.a, -a.exact_root_->first.b, a.exact_root_->first.d},
                                             a.exact_root_->second);
        return out;
    }

    friend Real max(const Real& a, const Real& b) {
        if (a.log_form() && b.log_form()) return *a.log_form() >= *b.log_form() ? a : b;
        if (a.root_form() && b.root_form()) {
            auto c = detail::root_compare(*a.root_form(), *b.root_form());
            if (c) return *c >= 0 ? a : b;
        }
        std::optional<mpq_class> ex;
        if (a.exact_ && b.exact_) ex = std::max(*a.exact_, *b.exact_);
        auto ae = a.ev_, be = b.ev_;
        return Real([ae, be](long p) {
            Ival x = ae(p), y = be(p);
            return Ival{std::max(x.lo, y.lo), std::max(x.hi, y.hi)};
        }, ex, std::nullopt);
    }

    // Integer power. Exponent may be negative for nonzero values.
    Real pow_int(long e) const {
        if (e == 0) return Real(mpq_class(1));
        if (e < 0) return Real(mpq_class(1)) / pow_int(-e);
        Real acc(mpq_class(1));
        Real base = *this;
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        // pow of exact values stays exact through operator*; also keep log form
        if (log_form()) acc.exact_log_ = *log_form() * e;
        if (!acc.exact_ && root_form() && detail::rb_sign(root_form()->first) >= 0)
            acc.exact_root_ = std::make_pair(detail::rb_pow(root_form()->first, static_cast<unsigned long>(e)),
                                             root_form()->second);
        return acc;
    }

    // k-th root of a nonnegative value.
    friend Real nth_root(const Real& a, unsigned long k) {
        if (k == 1) return a;
        std::optional<mpq_class> ex;
        std::optional<mpq_class> exlog;
        if (a.exact_) ex = detail::rational_root(*a.exact_, k);
        if (a.log_form()) exlog = *a.log_form() / mpq_class(static_cast<long>(k));
        std::optional<detail::RootForm> root;
        if (!ex && a.root_form() && detail::rb_sign(a.root_form()->first) >= 0)
            root = std::make_pair(a.root_form()->first, a.root_form()->second * k);
        auto ae = a.ev_;
        Real out = Real([ae, k](long p) {
            Ival x = ae(p);
            if (x.lo < 0) x.lo = 0;
            Ival lo = detail::mpfr_enclose(x.lo, p, [k](mpfr_ptr o, mpfr_srcptr v, mpfr_rnd_t m) { mpfr_rootn_ui(o, v, k, m); });
            Ival hi = detail::mpfr_enclose(x.hi, p, [k](mpfr_ptr o, mpfr_srcptr v, mpfr_rnd_t m) { mpfr_rootn_ui(o, v, k, m); });
            return Ival{lo.lo, hi.hi};
        }, ex, exlog);
        out.exact_root_ = root;
        return out;
    }

    friend Real sqrt(const Real& a) { return nth_root(a, 2); }

    // value^(num/den) for nonnegative values.
    Real pow_rational(const mpq_class& e) const {
        long num = mpz_get_si(e.get_num().get_mpz_t());
        unsigned long den = mpz_get_ui(e.get_den().get_mpz_t());
        return nth_root(pow_int(num), den);
    }

    friend Real exp(const Real& a) {
        std::optional<mpq_class> ex;
        if (a.exact_ && *a.exact_ == 0) ex = mpq_class(1);
        auto ae = a.ev_;
        return Real([ae](long p) {
            Ival x = ae(p);
            Ival lo = detail::mpfr_enclose(x.lo, p, [](mpfr_ptr o, mpfr_srcptr v, mpfr_rnd_t m) { mpfr_exp(o, v, m); });
            Ival hi = detail::mpfr_enclose(x.hi, p, [](mpfr_ptr o, mpfr_srcptr v, mpfr_rnd_t m) { mpfr_exp(o, v, m); });
            return Ival{lo.lo, hi.hi};
        }, ex, a.exact_);
    }

    // Refinement policy: start at 64 fractional bits, double, cap at 1024.
    static constexpr long kPrecStart = 64;
    static constexpr long kPrecCap = 1024;

    friend Cmp certified_compare(const Real& a, const Real& b) {
        if (a.exact_ && b.exact_) {
            int c = cmp(*a.exact_, *b.exact_);
            return c < 0 ? Cmp::less : (c > 0 ? Cmp::greater : Cmp::equal);
        }
        if (a.exact_log_ && b.exact_log_) {
            int c = cmp(*a.exact_log_, *b.exact_log_);
            return c < 0 ? Cmp::less : (c > 0 ? Cmp::greater : Cmp::equal);
        }
        if (a.root_form() && b.root_form()) {
            auto c = detail::root_compare(*a.root_form(), *b.root_form());
            if (c) return *c < 0 ? Cmp::less : (*c > 0 ? Cmp::greater : Cmp::equal);
        }
        for (long p = kPrecStart; p <= kPrecCap; p *= 2) {
            Ival x = a.ev_(p), y = b.ev_(p);
            if (x.hi < y.lo) return Cmp::less;
            if (y.hi < x.lo) return Cmp::greater;
        }
        throw UnresolvedComparison();
    }

    // a <= b with certification; equality of enclosure endpoints counts.
    friend bool certified_leq(const Real& a, const Real& b) {
        if (a.exact_ && b.exact_) return *a.exact_ <= *b.exact_;
        if (a.exact_log_ && b.exact_log_) return *a.exact_log_ <= *b.exact_log_;
        // mixed exact forms: e^0 = 1
        if (a.exact_log_ && b.exact_ && *a.exact_log_ == 0) return mpq_class(1) <= *b.exact_;
        if (a.exact_ && b.exact_log_ && *b.exact_log_ == 0) return *a.exact_ <= mpq_class(1);
        if (a.root_form() && b.root_form()) {
            auto c = detail::root_compare(*a.root_form(), *b.root_form());
            if (c) return *c <= 0;
        }
        for (long p = kPrecStart; p <= kPrecCap; p *= 2) {
            Ival x = a.ev_(p), y = b.ev_(p);
            if (x.hi <= y.lo) return true;
            if (y.hi < x.lo) return false;
        }
        throw UnresolvedComparison();
    }

    bool is_positive() const {
        if (exact_) return *exact_ > 0;
        if (exact_log_) return true;
        for (long p = kPrecStart; p <= kPrecCap; p *= 2) {
            Ival x = ev_(p);
            if (x.lo > 0) return true;
            if (x.hi < 0) return false;
        }
        throw UnresolvedComparison();
    }

    // Decimal enclosure for reporting.
    std::pair<std::string, std::string> decimal_interval(long prec = kPrecStart, int digits = 12) const {
        Ival x = ev_(prec);
        mpfr_t v;
        mpfr_init2(v, static_cast<mpfr_prec_t>(prec + 16));
        char buf[128];
        mpfr_set_q(v, x.lo.get_mpq_t(), MPFR_RNDD);
        mpfr_snprintf(buf, sizeof buf, "%.*RDg", digits, v);
        std::string lo(buf);
        mpfr_set_q(v, x.hi.get_mpq_t(), MPFR_RNDU);
        mpfr_snprintf(buf, sizeof buf, "%.*RUg", digits, v);
        std::string hi(buf);
        mpfr_clear(v);
        return {lo, hi};
    }

private:
    Real(Evaluator ev, std::optional<mpq_class> exact, std::optional<mpq_class> exact_log)
        : exact_(std::move(exact)), exact_log_(std::move(exact_log)), ev_(std::move(ev)) {}

    // log form: exact_log_ if present, or log of an exact value 1
    std::optional<mpq_class> log_form() const {
        if (exact_log_) return exact_log_;
        if (exact_ && *exact_ == 1) return mpq_class(0);
        return std::nullopt;
    }

    // root form: value = base^(1/k); bases with k > 1 are nonnegative
    std::optional<detail::RootForm> root_form() const {
        if (exact_) return std::make_pair(detail::RootBase{*exact_, mpq_class(0), 0}, 1ul);
        return exact_root_;
    }

    std::optional<mpq_class> exact_;
    std::optional<mpq_class> exact_log_;
    std::optional<detail::RootForm> exact_root_;
    Evaluator ev_;
};

}  // namespace sgp
