#ifndef OPQ_REAL_HPP
#define OPQ_REAL_HPP

#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace opq {

/// Arbitrary-precision real number (MPFR-backed, round-to-nearest).
///
/// Every value carries its own precision in bits. Binary operations produce
/// a result at the maximum of the operand precisions, so precision never
/// degrades through an expression. The process-wide default precision
/// (minimum 64, default 256 bits) applies to freshly constructed values.
class Real {
public:
    static mpfr_prec_t default_precision() { return default_prec().load(); }

    static void set_default_precision(mpfr_prec_t bits) {
        if (bits < 64)
            throw std::invalid_argument("Real: precision_bits must be >= 64");
        default_prec().store(bits);
    }

    Real() { init(default_precision()); mpfr_set_zero(v_, 1); }

    Real(long v) { init(default_precision()); mpfr_set_si(v_, v, MPFR_RNDN); }
    Real(int v) : Real(static_cast<long>(v)) {}
    Real(unsigned long v) { init(default_precision()); mpfr_set_ui(v_, v, MPFR_RNDN); }

    // Exact binary value of the double; not a decimal literal parse.
    explicit Real(double v) { init(default_precision()); mpfr_set_d(v_, v, MPFR_RNDN); }

    /// Parse a decimal string (scientific notation allowed) at the default precision.
    explicit Real(const std::string& decimal) {
        init(default_precision());
        if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("Real: cannot parse decimal string '" + decimal + "'");
    }

    static Real with_precision(mpfr_prec_t bits) {
        Real r(nullptr_tag{});
        r.init(bits);
        mpfr_set_zero(r.v_, 1);
        return r;
    }

    /// 2^e, exact.
    static Real pow2(long e) {
        Real r;
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    static Real pi() {
        Real r;
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    Real(const Real& o) { init(mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }

    Real(Real&& o) noexcept {
        init(64);
        mpfr_swap(v_, o.v_);
    }

    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));  // discards old value
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }

    ~Real() { mpfr_clear(v_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    long to_long_ceil() const { return mpfr_get_si(v_, MPFR_RNDU); }
    long to_long_floor() const { return mpfr_get_si(v_, MPFR_RNDD); }

    /// Deterministic scientific-notation decimal string with `digits`
    /// significant digits (round-to-nearest). Zero prints as "0".
    std::string to_decimal(std::size_t digits) const {
        if (is_nan()) return "nan";
        if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
        if (is_zero()) return "0";
        digits = std::max<std::size_t>(digits, 2);
        mpfr_exp_t e = 0;
        char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
        std::string m(s);
        mpfr_free_str(s);
        std::string sign_str;
        if (!m.empty() && m[0] == '-') {
            sign_str = "-";
            m.erase(0, 1);
        }
        long ee = static_cast<long>(e) - 1;  // value = d.ddd * 10^ee
        std::string out = sign_str + m.substr(0, 1) + "." + m.substr(1);
        out += (ee < 0) ? "e-" + std::to_string(-ee) : "e+" + std::to_string(ee);
        return out;
    }

    Real operator-() const {
        Real r = with_precision(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    Real& operator+=(const Real& o) { return *this = *this + o; }
    Real& operator-=(const Real& o) { return *this = *this - o; }
    Real& operator*=(const Real& o) { return *this = *this * o; }
    Real& operator/=(const Real& o) { return *this = *this / o; }

    friend Real operator+(const Real& a, const Real& b) {
        Real r = with_precision(std::max(a.precision(), b.precision()));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, const Real& b) {
        Real r = with_precision(std::max(a.precision(), b.precision()));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, const Real& b) {
        Real r = with_precision(std::max(a.precision(), b.precision()));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(const Real& a, const Real& b) {
        Real r = with_precision(std::max(a.precision(), b.precision()));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

private:
    struct nullptr_tag {};
    explicit Real(nullptr_tag) {}

    void init(mpfr_prec_t bits) { mpfr_init2(v_, bits); }

    static std::atomic<mpfr_prec_t>& default_prec() {
        static std::atomic<mpfr_prec_t> p{256};
        return p;
    }

    mpfr_t v_;
};

/// Sets the default precision for the lifetime of the scope, then restores.
class PrecisionScope {
public:
    explicit PrecisionScope(mpfr_prec_t bits) : saved_(Real::default_precision()) {
        Real::set_default_precision(bits);
    }
    ~PrecisionScope() { Real::set_default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    mpfr_prec_t saved_;
};

inline std::ostream& operator<<(std::ostream& os, const Real& v) {
    return os << v.to_decimal(20);
}

inline Real abs(const Real& x) {
    Real r = Real::with_precision(x.precision());
    mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

inline Real sqrt(const Real& x) {
    Real r = Real::with_precision(x.precision());
    mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

inline Real log(const Real& x) {
    Real r = Real::with_precision(x.precision());
    mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

inline Real exp(const Real& x) {
    Real r = Real::with_precision(x.precision());
    mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

inline Real cos(const Real& x) {
    Real r = Real::with_precision(x.precision());
    mpfr_cos(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

inline Real pow(const Real& base, const Real& e) {
    Real r = Real::with_precision(std::max(base.precision(), e.precision()));
    mpfr_pow(r.raw(), base.raw(), e.raw(), MPFR_RNDN);
    return r;
}

inline Real pow(const Real& base, long e) {
    Real r = Real::with_precision(base.precision());
    mpfr_pow_si(r.raw(), base.raw(), e, MPFR_RNDN);
    return r;
}

inline bool is_nonpositive_integer(const Real& x) {
    return x.sign() <= 0 && mpfr_integer_p(x.raw()) != 0;
}

/// Γ(x). Throws on poles (non-positive integers).
inline Real gamma_fn(const Real& x) {
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma_fn: pole at non-positive integer");
    Real r = Real::with_precision(x.precision());
    mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

/// Rising factorial (x)_n = x(x+1)...(x+n-1); (x)_0 = 1. Exact product.
inline Real pochhammer(const Real& x, long n) {
    if (n < 0) throw std::invalid_argument("pochhammer: n must be >= 0");
    Real r(1);
    Real t = x;
    for (long i = 0; i < n; ++i) {
        r *= t;
        t += Real(1);
    }
    return r;
}

}  // namespace opq

#endif
