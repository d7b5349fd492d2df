#ifndef OPQ_SOBOLEV_HPP
#define OPQ_SOBOLEV_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "opq/geronimus.hpp"
#include "opq/jacobi.hpp"
#include "opq/ortho.hpp"
#include "opq/poly.hpp"
#include "opq/real.hpp"

namespace opq {

/// Sobolev perturbation <p,q>_S = <p,q>_0 + M p(a)q(a) + N p'(a)q'(a).
struct SobolevParams {
    Real M;
    Real N;
    Real a;

    SobolevParams(Real m, Real n, Real a_) : M(std::move(m)), N(std::move(n)), a(std::move(a_)) {
        if (M < Real(0) || N < Real(0))
            throw std::domain_error("SobolevParams: M >= 0 and N >= 0 required");
    }
};

/// Christoffel-Darboux kernel derivative value
///   K_n^(k,s)(x, y) = sum_{i=0}^{n} P_i^(k)(x) P_i^(s)(y) / ||P_i||^2
/// from explicit polynomials. n = -1 gives the empty kernel 0.
inline Real cd_kernel_deriv(const OrthoSystem& sys, long n, int k, int s, const Real& x,
                            const Real& y) {
    if (n < 0) return Real(0);
    Real acc(0);
    auto polys = monic_polys(sys, n);
    Real nsq = sys.mu0;
    for (long i = 0; i <= n; ++i) {
        if (i >= 1) nsq *= sys.gamma(i);
        const Poly& p = polys[static_cast<std::size_t>(i)];
        acc += p.derivative(static_cast<unsigned>(k)).eval(x) *
               p.derivative(static_cast<unsigned>(s)).eval(y) / nsq;
    }
    return acc;
}

/// K_n^(0,s)(x, a) as a polynomial in x.
inline Poly cd_kernel_poly(const OrthoSystem& sys, long n, int s, const Real& a) {
    Poly acc;
    if (n < 0) return acc;
    auto polys = monic_polys(sys, n);
    Real nsq = sys.mu0;
    for (long i = 0; i <= n; ++i) {
        if (i >= 1) nsq *= sys.gamma(i);
        const Poly& p = polys[static_cast<std::size_t>(i)];
        acc = acc + (p.derivative(static_cast<unsigned>(s)).eval(a) / nsq) * p;
    }
    return acc;
}

/// Jacobi endpoint kernel K_n^(k,s)(-1,-1) from the closed-form scaled data
/// (the kernel is normalization invariant).
inline Real jacobi_kernel_minus1(const JacobiParams& p, long n, int k, int s) {
    if (n < 0) return Real(0);
    Real acc(0);
    for (long i = 0; i <= n; ++i)
        acc += scaled_derivative_minus1(p, i, k) * scaled_derivative_minus1(p, i, s) /
               scaled_norm_sq(p, i);
    return acc;
}

namespace detail {
struct KernelCache {
    std::mutex m;
    std::map<std::tuple<long, int, int>, Real> values;
};
}  // namespace detail

/// Sobolev system over a base measure. When constructed from JacobiParams
/// (a = -1), endpoint and kernel quantities use the jacobi closed forms, so
/// no polynomial of the scan degree is ever expanded.
struct SobolevSystem {
    OrthoSystem base;
    SobolevParams prm;
    std::optional<JacobiParams> jacobi;

    SobolevSystem(OrthoSystem b, SobolevParams s, std::optional<JacobiParams> j = std::nullopt)
        : base(std::move(b)),
          prm(std::move(s)),
          jacobi(std::move(j)),
          kcache_(std::make_shared<detail::KernelCache>()) {}

    std::shared_ptr<detail::KernelCache> kcache_;
};

inline SobolevSystem make_sobolev(OrthoSystem base, SobolevParams prm) {
    return SobolevSystem(std::move(base), std::move(prm));
}

inline SobolevSystem make_jacobi_sobolev(const JacobiParams& p, Real M, Real N) {
    return SobolevSystem(jacobi_system(p), SobolevParams(std::move(M), std::move(N), Real(-1)), p);
}

/// K_n^(k,s)(a, a) for the system's point a, cached. The (k,s) <-> (s,k)
/// symmetry at coincident points is an asserted identity, not a silent pick.
inline Real kernel_at_a(const SobolevSystem& sys, long n, int k, int s) {
    if (n < 0) return Real(0);
    int lo = std::min(k, s), hi = std::max(k, s);
    {
        std::lock_guard<std::mutex> lock(sys.kcache_->m);
        auto it = sys.kcache_->values.find({n, lo, hi});
        if (it != sys.kcache_->values.end()) return it->second;
    }
    Real v = sys.jacobi ? jacobi_kernel_minus1(*sys.jacobi, n, lo, hi)
                        : cd_kernel_deriv(sys.base, n, lo, hi, sys.prm.a, sys.prm.a);
    std::lock_guard<std::mutex> lock(sys.kcache_->m);
    sys.kcache_->values.emplace(std::make_tuple(n, lo, hi), v);
    return v;
}

/// Endpoint data of the Sobolev polynomial: Q_n(a), Q_n'(a) and the shared
/// Cramer denominator.
struct QEndpoint {
    Real q_at_a;
    Real dq_at_a;
    Real denom;
};

/// Cramer solution of the 2x2 endpoint system, laid out as:
///   q  = | pa    N*K01      | / D,   dq = | 1+M*K00  pa  | / D,
///        | dpa   1+N*K11    |             | M*K01    dpa |
///   D  = (1+M*K00)(1+N*K11) - M*N*K01^2.
inline QEndpoint q_endpoint_from_kernels(const Real& M, const Real& N, const Real& pa,
                                         const Real& dpa, const Real& K00, const Real& K01,
                                         const Real& K11) {
    Real d11 = Real(1) + M * K00;
    Real d22 = Real(1) + N * K11;
    Real denom = d11 * d22 - M * N * K01 * K01;
    if (!(denom > Real(0)))
        throw std::runtime_error(
            "q_endpoint: non-positive Cramer determinant (invalid M, N or precision exhausted)");
    Real q = (pa * d22 - N * K01 * dpa) / denom;
    Real dq = (d11 * dpa - M * K01 * pa) / denom;
    return {std::move(q), std::move(dq), std::move(denom)};
}

namespace detail {

/// Monic P_n^(j)(a): closed form for the Jacobi instance, polynomial
/// evaluation otherwise.
inline Real monic_deriv_at_a(const SobolevSystem& sys, long n, int j) {
    if (sys.jacobi)
        return scaled_derivative_minus1(*sys.jacobi, n, j) / scaled_factor(*sys.jacobi, n);
    return monic_poly(sys.base, n).derivative(static_cast<unsigned>(j)).eval(sys.prm.a);
}

inline Real monic_norm_sq(const SobolevSystem& sys, long n) { return norm_sq(sys.base, n); }

}  // namespace detail

/// Q_n(a), Q_n'(a) via the kernel-order n-1 Cramer system; Q_0 = 1.
inline QEndpoint q_endpoint(const SobolevSystem& sys, long n) {
    if (n < 0) throw std::invalid_argument("q_endpoint: n >= 0");
    if (n == 0) return {Real(1), Real(0), Real(1)};
    return q_endpoint_from_kernels(sys.prm.M, sys.prm.N, detail::monic_deriv_at_a(sys, n, 0),
                                   detail::monic_deriv_at_a(sys, n, 1), kernel_at_a(sys, n - 1, 0, 0),
                                   kernel_at_a(sys, n - 1, 0, 1), kernel_at_a(sys, n - 1, 1, 1));
}

/// Monic Sobolev-orthogonal polynomial
///   Q_n = P_n - M Q_n(a) K_{n-1}(x,a) - N Q_n'(a) K_{n-1}^(0,1)(x,a).
inline Poly q_poly(const SobolevSystem& sys, long n) {
    if (n < 0) throw std::invalid_argument("q_poly: n >= 0");
    Poly p = monic_poly(sys.base, n);
    if (n == 0) return p;
    QEndpoint e = q_endpoint(sys, n);
    Poly k0 = cd_kernel_poly(sys.base, n - 1, 0, sys.prm.a);
    Poly k1 = cd_kernel_poly(sys.base, n - 1, 1, sys.prm.a);
    return p - (sys.prm.M * e.q_at_a) * k0 - (sys.prm.N * e.dq_at_a) * k1;
}

/// Q_n^(j)(a) = P_n^(j)(a) - M Q_n(a) K^(0,j) - N Q_n'(a) K^(1,j), all at
/// kernel order n-1; closed-form endpoint route for the Jacobi instance.
inline Real q_deriv_at_a(const SobolevSystem& sys, long n, int j) {
    QEndpoint e = q_endpoint(sys, n);
    if (j == 0) return e.q_at_a;
    if (j == 1) return e.dq_at_a;
    return detail::monic_deriv_at_a(sys, n, j) -
           sys.prm.M * e.q_at_a * kernel_at_a(sys, n - 1, 0, j) -
           sys.prm.N * e.dq_at_a * kernel_at_a(sys, n - 1, 1, j);
}

inline Real sobolev_inner(const SobolevSystem& sys, const Poly& p, const Poly& q) {
    return inner_mu(sys.base, p, q) + sys.prm.M * p.eval(sys.prm.a) * q.eval(sys.prm.a) +
           sys.prm.N * p.derivative().eval(sys.prm.a) * q.derivative().eval(sys.prm.a);
}

/// ||Q_n||^2_S = ||P_n||^2_mu + M Q_n(a) P_n(a) + N Q_n'(a) P_n'(a),
/// computed without polynomial expansion.
inline Real q_norm_sq(const SobolevSystem& sys, long n) {
    QEndpoint e = q_endpoint(sys, n);
    Real v = detail::monic_norm_sq(sys, n) +
             sys.prm.M * e.q_at_a * detail::monic_deriv_at_a(sys, n, 0) +
             sys.prm.N * e.dq_at_a * detail::monic_deriv_at_a(sys, n, 1);
    if (!(v > Real(0)))
        throw std::runtime_error("q_norm_sq: non-positive Sobolev norm (precision exhausted)");
    return v;
}

/// 3x3 determinantal construction of Q_n (cofactor expansion over the first
/// column); an independent route kept for cross-validation against q_poly.
inline Poly q_poly_determinant(const SobolevSystem& sys, long n) {
    if (n == 0) return Poly::constant(Real(1));
    const Real &M = sys.prm.M, &N = sys.prm.N, &a = sys.prm.a;
    Real pa = detail::monic_deriv_at_a(sys, n, 0);
    Real dpa = detail::monic_deriv_at_a(sys, n, 1);
    Real K00 = kernel_at_a(sys, n - 1, 0, 0);
    Real K01 = kernel_at_a(sys, n - 1, 0, 1);
    Real K11 = kernel_at_a(sys, n - 1, 1, 1);
    Poly k0 = cd_kernel_poly(sys.base, n - 1, 0, a);
    Poly k1 = cd_kernel_poly(sys.base, n - 1, 1, a);
    Real D = (Real(1) + M * K00) * (Real(1) + N * K11) - M * N * K01 * K01;
    Poly m21 = (Real(1) + N * K11) * (M * k0) - (M * K01) * (N * k1);
    Poly m31 = (N * K01) * (M * k0) - (Real(1) + M * K00) * (N * k1);
    Poly num = D * monic_poly(sys.base, n) - pa * m21 + dpa * m31;
    return (Real(1) / D) * num;
}

/// Connection coefficients of
/// (x-a)^2 Q_n = P_{n+2}^gg + a_pp1 P_{n+1}^gg + a_p0 P_n^gg
///               + a_m1 P_{n-1}^gg + a_m2 P_{n-2}^gg.
struct QQConnection {
    Real a_pp1;
    Real a_p0;
    Real a_m1;
    Real a_m2;
    Provenance prov;
};

/// Expansion coefficient of (x-a)^2 Q_n on P_k^gg for k <= n-3. The
/// five-term truncation drops these; they are nonzero for M, N > 0 and equal
///   -(M Q_n(a) P_k^gg(a) + N Q_n'(a) (P_k^gg)'(a)) / ||P_k^gg||^2_gg,
/// the same cross-term pattern as the closed-form a_m1, a_m2. Appending them
/// makes the connection an exact identity (see the full-expansion checks).
inline Real qq_tail_coeff(const SobolevSystem& sys, const GGSystem& g, long n, long k) {
    if (k < 0 || k > n - 3) throw std::invalid_argument("qq_tail_coeff: 0 <= k <= n-3");
    QEndpoint e = q_endpoint(sys, n);
    Poly pk = gg_poly(g, k);
    Real cross = sys.prm.M * e.q_at_a * pk.eval(sys.prm.a) +
                 sys.prm.N * e.dq_at_a * pk.derivative().eval(sys.prm.a);
    return -cross / gg_norm_sq(g, k);
}

inline QQConnection qq_connection(const SobolevSystem& sys, const GGSystem& g, long n) {
    if (n < 0) throw std::invalid_argument("qq_connection: n >= 0");
    if (n < 4) {
        FiveTerm ft = detail::project_five_term(g, q_poly(sys, n), n);
        return {std::move(ft.a_pp1), std::move(ft.a_p0), std::move(ft.a_m1), std::move(ft.a_m2),
                Provenance::projection};
    }
    QEndpoint e = q_endpoint(sys, n);
    const Real &M = sys.prm.M, &N = sys.prm.N;
    // <Q_n, P_k>_0 = -(M Q_n(a) P_k(a) + N Q_n'(a) P_k'(a)) for k < n.
    auto cross = [&](long k) {
        return M * e.q_at_a * detail::monic_deriv_at_a(sys, k, 0) +
               N * e.dq_at_a * detail::monic_deriv_at_a(sys, k, 1);
    };
    Real Nn = norm_sq(g.base, n), Nm1 = norm_sq(g.base, n - 1), Nm2 = norm_sq(g.base, n - 2),
         Nm3 = norm_sq(g.base, n - 3), Nm4 = norm_sq(g.base, n - 4);
    Real Bn = g.B(n), Bn1 = g.B(n + 1), Bm1 = g.B(n - 1), Bm2 = g.B(n - 2);
    Real Cn = g.C(n), Cn1 = g.C(n + 1), Cm1 = g.C(n - 1), Cm2 = g.C(n - 2);
    QQConnection out{Real(0), Real(0), Real(0), Real(0), Provenance::closed_form};
    out.a_pp1 = (Bn1 * Nn - Cn1 * cross(n - 1)) / (Cn1 * Nm1);
    out.a_p0 = (Nn - cross(n - 1) * Bn - cross(n - 2) * Cn) / (Cn * Nm2);
    out.a_m1 = -(cross(n - 1) + Bm1 * cross(n - 2) + Cm1 * cross(n - 3)) / (Cm1 * Nm3);
    out.a_m2 = -(cross(n - 2) + Bm2 * cross(n - 3) + Cm2 * cross(n - 4)) / (Cm2 * Nm4);
    return out;
}

}  // namespace opq

#endif
