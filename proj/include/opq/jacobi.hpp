#ifndef OPQ_JACOBI_HPP
#define OPQ_JACOBI_HPP

#include <stdexcept>
#include <string>
#include <utility>

#include "opq/ortho.hpp"
#include "opq/real.hpp"

namespace opq {

/// Parameters of the Jacobi weight (1-x)^alpha (1+x)^beta on [-1, 1].
struct JacobiParams {
    Real alpha;
    Real beta;

    JacobiParams(Real a, Real b) : alpha(std::move(a)), beta(std::move(b)) {
        if (!(alpha > Real(-1)) || !(beta > Real(-1)))
            throw std::domain_error("JacobiParams: alpha > -1 and beta > -1 required");
    }

    /// beta > 1 is required before the double Geronimus shift beta -> beta-2.
    void require_gg() const {
        if (!(beta > Real(1)))
            throw std::domain_error("JacobiParams: beta > 1 required for the gg transformation");
    }
};

/// Monic recurrence coefficient beta_n. n = 0 uses the cancelled form
/// (beta-alpha)/(alpha+beta+2), which stays finite when alpha+beta = 0.
inline Real jacobi_beta_n(const JacobiParams& p, long n) {
    const Real &a = p.alpha, &b = p.beta;
    if (n == 0) return (b - a) / (a + b + Real(2));
    Real t = Real(2 * n) + a + b;
    return (b * b - a * a) / (t * (t + Real(2)));
}

/// Monic recurrence coefficient gamma_n (n >= 1). n = 1 uses the cancelled
/// form 4(1+alpha)(1+beta)/((alpha+beta+2)^2 (alpha+beta+3)).
inline Real jacobi_gamma_n(const JacobiParams& p, long n) {
    const Real &a = p.alpha, &b = p.beta;
    if (n < 1) throw std::invalid_argument("jacobi_gamma_n: n must be >= 1");
    if (n == 1) {
        Real s = a + b + Real(2);
        return Real(4) * (Real(1) + a) * (Real(1) + b) / (s * s * (s + Real(1)));
    }
    Real t = Real(2 * n) + a + b;
    return Real(4 * n) * (Real(n) + a) * (Real(n) + b) * (Real(n) + a + b) /
           ((t - Real(1)) * t * t * (t + Real(1)));
}

/// mu0 = 2^(alpha+beta+1) Gamma(alpha+1) Gamma(beta+1) / Gamma(alpha+beta+2).
inline Real jacobi_mu0(const JacobiParams& p) {
    return pow(Real(2), p.alpha + p.beta + Real(1)) * gamma_fn(p.alpha + Real(1)) *
           gamma_fn(p.beta + Real(1)) / gamma_fn(p.alpha + p.beta + Real(2));
}

inline OrthoSystem jacobi_system(const JacobiParams& p) {
    JacobiParams copy = p;
    return OrthoSystem([copy](long n) { return jacobi_beta_n(copy, n); },
                       [copy](long n) { return jacobi_gamma_n(copy, n); }, jacobi_mu0(p),
                       "jacobi(" + p.alpha.to_decimal(6) + "," + p.beta.to_decimal(6) + ")");
}

/// Tilde normalization constant (n+alpha+beta+1)_n / (2^n (alpha+1)_n);
/// the scaled polynomial is P~_n = scaled_factor(n) * P_n^monic.
inline Real scaled_factor(const JacobiParams& p, long n) {
    return pochhammer(Real(n) + p.alpha + p.beta + Real(1), n) /
           (Real::pow2(n) * pochhammer(p.alpha + Real(1), n));
}

/// k-th derivative of the scaled polynomial at -1, closed form:
///   P~_n^(k)(-1) = (-1)^(n-k) [n! G(a+1)/G(n+a+1)] [(a+b+n+1)_k / 2^k]
///                  [G(n+b+1) / (G(n-k+1) G(b+k+1))]
/// Returns 0 for k > n.
inline Real scaled_derivative_minus1(const JacobiParams& p, long n, long k) {
    if (n < 0 || k < 0) throw std::invalid_argument("scaled_derivative_minus1: n, k >= 0");
    if (k > n) return Real(0);
    const Real &a = p.alpha, &b = p.beta;
    Real v = gamma_fn(Real(n) + Real(1)) * gamma_fn(a + Real(1)) / gamma_fn(Real(n) + a + Real(1));
    v *= pochhammer(a + b + Real(n) + Real(1), k) / Real::pow2(k);
    v *= gamma_fn(Real(n) + b + Real(1)) /
         (gamma_fn(Real(n - k) + Real(1)) * gamma_fn(b + Real(k) + Real(1)));
    if ((n - k) % 2 != 0) v = -v;
    return v;
}

/// P~_n(-1) = (n!/(alpha+1)_n) (-1)^n binom(n+beta, n).
inline Real scaled_value_minus1(const JacobiParams& p, long n) {
    return scaled_derivative_minus1(p, n, 0);
}

/// ||P~_n||^2 over the Jacobi measure, closed form from the norm of the monic
/// polynomial times scaled_factor(n)^2.
inline Real scaled_norm_sq(const JacobiParams& p, long n) {
    if (n < 0) throw std::invalid_argument("scaled_norm_sq: n >= 0");
    const Real &a = p.alpha, &b = p.beta;
    if (n == 0) return jacobi_mu0(p);
    Real g1 = gamma_fn(a + Real(1));
    return pow(Real(2), a + b + Real(1)) * g1 * g1 * gamma_fn(Real(n) + b + Real(1)) *
           gamma_fn(Real(n) + Real(1)) /
           ((Real(2 * n) + a + b + Real(1)) * gamma_fn(Real(n) + a + b + Real(1)) *
            gamma_fn(Real(n) + a + Real(1)));
}

struct GGExpansion {
    Real B;
    Real C;
};

/// Expansion coefficients of P_n^(alpha,beta-2) over the (alpha,beta) family:
///   B_n = 4n(alpha+n) / ((2n+a+b-2)(2n+a+b))
///   C_n = 4n(n-1)(alpha+n)(alpha+n-1) / ((2n+a+b-3)(2n+a+b-2)^2 (2n+a+b-1))
/// with B_0 = 0 and C_0 = C_1 = 0.
inline GGExpansion gg_expansion_coeffs(const JacobiParams& p, long n) {
    p.require_gg();
    if (n < 0) throw std::invalid_argument("gg_expansion_coeffs: n >= 0");
    const Real &a = p.alpha, &b = p.beta;
    GGExpansion out{Real(0), Real(0)};
    if (n >= 1) {
        Real t = Real(2 * n) + a + b;
        out.B = Real(4 * n) * (a + Real(n)) / ((t - Real(2)) * t);
        if (n >= 2)
            out.C = Real(4 * n) * Real(n - 1) * (a + Real(n)) * (a + Real(n - 1)) /
                    ((t - Real(3)) * (t - Real(2)) * (t - Real(2)) * (t - Real(1)));
    }
    return out;
}

}  // namespace opq

#endif
