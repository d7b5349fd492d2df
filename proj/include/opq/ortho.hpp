#ifndef OPQ_ORTHO_HPP
#define OPQ_ORTHO_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opq/poly.hpp"
#include "opq/real.hpp"

namespace opq {

/// Gauss rule: strictly increasing nodes, positive weights summing to mu0.
struct QuadratureRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;

    std::size_t size() const { return nodes.size(); }

    Real integrate(const Poly& p) const {
        Real acc(0);
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * p.eval(nodes[i]);
        return acc;
    }

    Real integrate_product(const Poly& p, const Poly& q) const {
        Real acc(0);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += weights[i] * p.eval(nodes[i]) * q.eval(nodes[i]);
        return acc;
    }
};

namespace detail {
struct QuadCache {
    std::mutex m;
    std::map<long, QuadratureRule> rules;
};
}  // namespace detail

/// Monic orthogonal polynomial system given by its three-term recurrence
///   x P_n = P_{n+1} + beta(n) P_n + gamma(n) P_{n-1},   P_0 = 1, P_{-1} = 0,
/// with gamma(n) > 0 for n >= 1 and zeroth moment mu0 > 0.
/// Coefficient callables must be pure; the value is immutable and thread-safe.
struct OrthoSystem {
    std::function<Real(long)> beta;
    std::function<Real(long)> gamma;
    Real mu0;
    std::string label;

    OrthoSystem(std::function<Real(long)> b, std::function<Real(long)> g, Real m0,
                std::string lbl = "")
        : beta(std::move(b)),
          gamma(std::move(g)),
          mu0(std::move(m0)),
          label(std::move(lbl)),
          cache_(std::make_shared<detail::QuadCache>()) {
        if (!(mu0 > Real(0))) throw std::domain_error("OrthoSystem: mu0 must be > 0");
    }

    std::shared_ptr<detail::QuadCache> cache_;  // shared across copies
};

/// Monic P_n by the forward recurrence.
inline Poly monic_poly(const OrthoSystem& sys, long n) {
    if (n < 0) throw std::invalid_argument("monic_poly: n must be >= 0");
    Poly prev;                      // P_{-1} = 0
    Poly cur = Poly::constant(Real(1));  // P_0
    for (long k = 0; k < n; ++k) {
        // P_{k+1} = (x - beta_k) P_k - gamma_k P_{k-1}
        Poly next = Poly::monomial(1) * cur - sys.beta(k) * cur;
        if (k >= 1) next = next - sys.gamma(k) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// All of P_0..P_n in one recurrence pass.
inline std::vector<Poly> monic_polys(const OrthoSystem& sys, long n) {
    std::vector<Poly> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    Poly prev;
    Poly cur = Poly::constant(Real(1));
    out.push_back(cur);
    for (long k = 0; k < n; ++k) {
        Poly next = Poly::monomial(1) * cur - sys.beta(k) * cur;
        if (k >= 1) next = next - sys.gamma(k) * prev;
        prev = std::move(cur);
        cur = next;
        out.push_back(cur);
    }
    return out;
}

/// ||P_n||^2 = mu0 * gamma_1 ... gamma_n.
inline Real norm_sq(const OrthoSystem& sys, long n) {
    if (n < 0) throw std::invalid_argument("norm_sq: n must be >= 0");
    Real acc = sys.mu0;
    for (long k = 1; k <= n; ++k) acc *= sys.gamma(k);
    return acc;
}

namespace detail {

/// Number of eigenvalues of the symmetric tridiagonal (diag d, offdiag e)
/// strictly below lambda, by the Sturm pivot count. e2[i] = e_i^2 couples
/// rows i-1 and i.
inline int sturm_count_below(const std::vector<Real>& d, const std::vector<Real>& e2,
                             const Real& lambda, const Real& tiny) {
    int count = 0;
    Real q(1);
    for (std::size_t i = 0; i < d.size(); ++i) {
        Real piv = d[i] - lambda;
        if (i > 0) piv -= e2[i] / q;
        if (piv.is_zero()) piv = -tiny;  // nudge exact hits; keeps the count consistent
        if (piv.sign() < 0) ++count;
        q = piv;
    }
    return count;
}

}  // namespace detail

/// m-point Gauss rule for the system's measure (Golub–Welsch data, eigenvalues
/// by Sturm bisection at working precision, weights from the Christoffel
/// function of the orthonormal recurrence).
inline QuadratureRule gauss_rule(const OrthoSystem& sys, long m) {
    if (m < 1) throw std::invalid_argument("gauss_rule: m must be >= 1");

    std::vector<Real> d, e, e2;
    d.reserve(m);
    e2.assign(static_cast<std::size_t>(m), Real(0));
    e.assign(static_cast<std::size_t>(m), Real(0));
    for (long i = 0; i < m; ++i) d.push_back(sys.beta(i));
    for (long i = 1; i < m; ++i) {
        Real g = sys.gamma(i);
        if (!(g > Real(0)))
            throw std::domain_error("gauss_rule: gamma_" + std::to_string(i) +
                                    " <= 0 (invalid system)");
        e[static_cast<std::size_t>(i)] = sqrt(g);
        e2[static_cast<std::size_t>(i)] = g;
    }

    // Gershgorin enclosure.
    Real lo = d[0], hi = d[0], scale(0);
    for (long i = 0; i < m; ++i) {
        std::size_t ui = static_cast<std::size_t>(i);
        Real radius = e[ui];
        if (i + 1 < m) radius += e[ui + 1];
        if (d[ui] - radius < lo) lo = d[ui] - radius;
        if (d[ui] + radius > hi) hi = d[ui] + radius;
        Real s = abs(d[ui]) + radius;
        if (s > scale) scale = s;
    }
    if (scale.is_zero()) scale = Real(1);
    lo -= Real(1);
    hi += Real(1);

    mpfr_prec_t prec = sys.mu0.precision();
    Real tiny = scale * Real::pow2(-4 * static_cast<long>(prec));
    long iters = static_cast<long>(prec) + 24;

    QuadratureRule rule;
    rule.nodes.reserve(m);
    rule.weights.reserve(m);

    for (long j = 0; j < m; ++j) {
        Real a = lo, b = hi;
        for (long it = 0; it < iters; ++it) {
            Real mid = (a + b) / Real(2);
            if (detail::sturm_count_below(d, e2, mid, tiny) <= static_cast<int>(j))
                a = mid;
            else
                b = mid;
        }
        rule.nodes.push_back((a + b) / Real(2));
    }

    // w_j = 1 / sum_{k<m} phat_k(x_j)^2 with orthonormal phat_k.
    Real inv_sqrt_mu0 = Real(1) / sqrt(sys.mu0);
    for (long j = 0; j < m; ++j) {
        const Real& x = rule.nodes[static_cast<std::size_t>(j)];
        Real pm1(0), p0 = inv_sqrt_mu0, sum = p0 * p0;
        for (long k = 0; k + 1 < m; ++k) {
            Real p1 = ((x - sys.beta(k)) * p0 - e[static_cast<std::size_t>(k)] * pm1) /
                      e[static_cast<std::size_t>(k + 1)];
            sum += p1 * p1;
            pm1 = p0;
            p0 = p1;
        }
        rule.weights.push_back(Real(1) / sum);
    }
    return rule;
}

namespace detail {

inline long round_up_pow2(long v) {
    long p = 1;
    while (p < v) p <<= 1;
    return p;
}

/// Cached rule of size >= needed (size rounded up to a power of two).
inline const QuadratureRule& cached_rule(const OrthoSystem& sys, long needed) {
    long m = round_up_pow2(std::max<long>(needed, 1));
    std::lock_guard<std::mutex> lock(sys.cache_->m);
    auto it = sys.cache_->rules.find(m);
    if (it == sys.cache_->rules.end())
        it = sys.cache_->rules.emplace(m, gauss_rule(sys, m)).first;
    return it->second;
}

}  // namespace detail

/// <p, q>_mu by a Gauss rule exact for the product degree.
inline Real inner_mu(const OrthoSystem& sys, const Poly& p, const Poly& q) {
    if (p.is_zero() || q.is_zero()) return Real(0);
    long dp = static_cast<long>(*p.degree());
    long dq = static_cast<long>(*q.degree());
    long needed = (dp + dq) / 2 + 1;  // ceil((dp+dq+1)/2)
    return detail::cached_rule(sys, needed).integrate_product(p, q);
}

using BilinearForm = std::function<Real(const Poly&, const Poly&)>;

/// Monic orthogonal polynomials 0..n for an arbitrary symmetric
/// positive-definite bilinear form, by sequential Gram–Schmidt on the
/// monomial basis. Brute-force oracle: independent of every closed-form
/// construction it validates.
inline std::vector<Poly> gram_schmidt_oracle(const BilinearForm& inner, long n) {
    if (n < 0) throw std::invalid_argument("gram_schmidt_oracle: n must be >= 0");
    std::vector<Poly> q;
    std::vector<Real> qnorm;
    q.reserve(static_cast<std::size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) {
        Poly cur = Poly::monomial(static_cast<std::size_t>(k));
        for (long j = 0; j < k; ++j) {
            Real proj = inner(cur, q[static_cast<std::size_t>(j)]) / qnorm[static_cast<std::size_t>(j)];
            cur = cur - proj * q[static_cast<std::size_t>(j)];
        }
        Real nsq = inner(cur, cur);
        if (!(nsq > Real(0)))
            throw std::runtime_error(
                "gram_schmidt_oracle: non-positive squared norm at degree " + std::to_string(k) +
                " (form not positive definite, or precision exhausted)");
        q.push_back(std::move(cur));
        qnorm.push_back(std::move(nsq));
    }
    return q;
}

}  // namespace opq

#endif
