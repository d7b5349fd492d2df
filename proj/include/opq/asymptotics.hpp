#ifndef OPQ_ASYMPTOTICS_HPP
#define OPQ_ASYMPTOTICS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opq/jacobi.hpp"
#include "opq/real.hpp"
#include "opq/sobolev.hpp"

namespace opq {

struct ConvergenceRow {
    long n;
    Real value;
    Real limit;
    Real abs_error;
};

/// Scan payload: rows (n, value, limit, abs_error) strictly increasing in n,
/// scan parameters, and the fitted log-log decay exponent (absent until
/// fit_decay runs, or when convergence is exact).
struct ConvergenceTable {
    std::string kind;
    std::vector<ConvergenceRow> rows;
    std::vector<std::pair<std::string, std::string>> meta;
    std::optional<Real> decay_exponent;
};

/// Geometric grid n_i = ceil(n0 * r^i), r = sqrt(2), capped at n_max. Even i
/// is computed in integer arithmetic, odd i through a high-precision sqrt(2),
/// so exact powers (including 4096) are never perturbed by rounding.
inline std::vector<long> geometric_grid(long n_max, long n0 = 16) {
    if (n_max < 1) throw std::invalid_argument("geometric_grid: n_max >= 1");
    if (n_max <= n0) return {n_max};
    Real sqrt2 = sqrt(Real(2));
    std::vector<long> grid;
    long even = n0;  // n0 * 2^(i/2)
    for (int i = 0;; ++i) {
        long v;
        if (i % 2 == 0) {
            if (i > 0) even *= 2;
            v = even;
        } else {
            v = (Real(even) * sqrt2).to_long_ceil();
        }
        if (v > n_max) break;
        if (grid.empty() || v > grid.back()) grid.push_back(v);
    }
    if (grid.empty() || grid.back() < n_max) grid.push_back(n_max);
    return grid;
}

namespace detail {

inline void push_row(ConvergenceTable& t, long n, Real value, const Real& limit) {
    Real err = abs(value - limit);
    t.rows.push_back({n, std::move(value), limit, std::move(err)});
}

inline std::string meta_decimal(const Real& v) { return v.to_decimal(40); }

/// Running closed-form endpoint data of the scaled Jacobi polynomials at -1.
/// Holds Gamma(i+1), Gamma(i+alpha+1), Gamma(i+beta+1), Gamma(i+alpha+beta+1)
/// updated by one multiplication each per index, valid for i >= 1; i = 0 is
/// special-cased (P~_0 = 1, norm = mu0).
class EndpointAccum {
public:
    explicit EndpointAccum(const JacobiParams& p)
        : p_(p),
          i_(0),
          g_n1_(1),
          g_na1_(gamma_fn(p.alpha + Real(2))),
          g_nb1_(gamma_fn(p.beta + Real(2))),
          g_nab1_(gamma_fn(p.alpha + p.beta + Real(2))),
          gamma_a1_(gamma_fn(p.alpha + Real(1))),
          two_ab1_(pow(Real(2), p.alpha + p.beta + Real(1))),
          mu0_(jacobi_mu0(p)) {}

    long index() const { return i_; }

    void advance() {
        ++i_;
        if (i_ == 1) return;  // members were initialized for i = 1
        Real i_real(i_ - 1);
        g_n1_ *= i_real + Real(1);
        g_na1_ *= i_real + p_.alpha + Real(1);
        g_nb1_ *= i_real + p_.beta + Real(1);
        g_nab1_ *= i_real + p_.alpha + p_.beta + Real(1);
    }

    /// P~_i^(k)(-1).
    Real tilde_deriv(long k) const {
        if (i_ < k) return Real(0);
        if (i_ == 0) return Real(1);  // k == 0
        Real v = deriv_const(k);
        v *= pochhammer(p_.alpha + p_.beta + Real(i_) + Real(1), k);
        v *= pochhammer(Real(i_ - k) + Real(1), k);  // Gamma(i+1)/Gamma(i-k+1)
        v *= g_nb1_ / g_na1_;
        if ((i_ - k) % 2 != 0) v = -v;
        return v;
    }

    /// ||P~_i||^2 over the Jacobi measure.
    Real tilde_norm_sq() const {
        if (i_ == 0) return mu0_;
        return two_ab1_ * gamma_a1_ * gamma_a1_ * g_nb1_ * g_n1_ /
               ((Real(2 * i_) + p_.alpha + p_.beta + Real(1)) * g_nab1_ * g_na1_);
    }

private:
    // Gamma(alpha+1) / (2^k Gamma(beta+k+1)), cached per derivative order.
    const Real& deriv_const(long k) const {
        auto it = dconst_.find(k);
        if (it == dconst_.end())
            it = dconst_
                     .emplace(k, gamma_a1_ / (Real::pow2(k) *
                                              gamma_fn(p_.beta + Real(k) + Real(1))))
                     .first;
        return it->second;
    }

    JacobiParams p_;
    long i_;
    Real g_n1_, g_na1_, g_nb1_, g_nab1_;
    Real gamma_a1_, two_ab1_, mu0_;
    mutable std::map<long, Real> dconst_;
};

}  // namespace detail

/// Gamma scaling scan: value(n) = n^(k-l) Gamma(n+l) / Gamma(n+k),
/// limit 1.
inline ConvergenceTable gamma_ratio_scan(long k, long l, const std::vector<long>& ns) {
    if (k < 0 || l < 0) throw std::domain_error("gamma_ratio_scan: k, l >= 0");
    ConvergenceTable t;
    t.kind = "gamma";
    t.meta = {{"k", std::to_string(k)}, {"l", std::to_string(l)}};
    Real limit(1);
    for (long n : ns) {
        // Gamma(n+l)/Gamma(n+k) as a rising-factorial ratio.
        Real ratio(1);
        if (k >= l)
            ratio = Real(1) / pochhammer(Real(n + l), k - l);
        else
            ratio = pochhammer(Real(n + k), l - k);
        Real value = pow(Real(n), Real(k - l)) * ratio;
        detail::push_row(t, n, std::move(value), limit);
    }
    return t;
}

/// value(n) = (-1)^n P~_n^(k)(-1) / n^(-alpha+beta+2k),
/// limit Gamma(alpha+1)/((-2)^k Gamma(beta+k+1)).
inline ConvergenceTable endpoint_limit_scan(const JacobiParams& p, long k,
                                            const std::vector<long>& ns) {
    if (k < 0) throw std::domain_error("endpoint_limit_scan: k >= 0");
    ConvergenceTable t;
    t.kind = "endpoint";
    t.meta = {{"alpha", detail::meta_decimal(p.alpha)},
              {"beta", detail::meta_decimal(p.beta)},
              {"k", std::to_string(k)}};
    Real limit = gamma_fn(p.alpha + Real(1)) /
                 (pow(Real(-2), k) * gamma_fn(p.beta + Real(k) + Real(1)));
    Real expo = -p.alpha + p.beta + Real(2 * k);
    for (long n : ns) {
        Real value = scaled_derivative_minus1(p, n, k) / pow(Real(n), expo);
        if (n % 2 != 0) value = -value;
        detail::push_row(t, n, std::move(value), limit);
    }
    return t;
}

/// value(n) = n^(2 alpha + 1) ||P~_n||^2, limit 2^(alpha+beta) Gamma(alpha+1)^2.
inline ConvergenceTable norm_limit_scan(const JacobiParams& p, const std::vector<long>& ns) {
    ConvergenceTable t;
    t.kind = "norm_limit";
    t.meta = {{"alpha", detail::meta_decimal(p.alpha)}, {"beta", detail::meta_decimal(p.beta)}};
    Real g = gamma_fn(p.alpha + Real(1));
    Real limit = pow(Real(2), p.alpha + p.beta) * g * g;
    for (long n : ns) {
        Real value = pow(Real(n), Real(2) * p.alpha + Real(1)) * scaled_norm_sq(p, n);
        detail::push_row(t, n, std::move(value), limit);
    }
    return t;
}

/// value(n) = K_{n-1}^(k,s)(-1,-1) / n^(2 beta + 2k + 2s + 2),
/// limit (-1)^(k+s) / (2^(alpha+beta+k+s+1) (beta+k+s+1) G(beta+k+1) G(beta+s+1)).
inline ConvergenceTable kernel_limit_scan(const JacobiParams& p, long k, long s,
                                          const std::vector<long>& ns) {
    if (k < 0 || s < 0) throw std::domain_error("kernel_limit_scan: k, s >= 0");
    ConvergenceTable t;
    t.kind = "kernel";
    t.meta = {{"alpha", detail::meta_decimal(p.alpha)},
              {"beta", detail::meta_decimal(p.beta)},
              {"k", std::to_string(k)},
              {"s", std::to_string(s)}};
    Real limit = Real(1) / (pow(Real(2), p.alpha + p.beta + Real(k + s) + Real(1)) *
                            (p.beta + Real(k + s) + Real(1)) *
                            gamma_fn(p.beta + Real(k) + Real(1)) *
                            gamma_fn(p.beta + Real(s) + Real(1)));
    if ((k + s) % 2 != 0) limit = -limit;
    Real expo = Real(2) * p.beta + Real(2 * k + 2 * s + 2);

    detail::EndpointAccum acc(p);
    Real sum(0);
    std::size_t next = 0;
    for (long i = 0; next < ns.size(); ++i) {
        if (i == ns[next]) {
            Real value = sum / pow(Real(i), expo);
            detail::push_row(t, i, std::move(value), limit);
            if (++next == ns.size()) break;
        }
        sum += acc.tilde_deriv(k) * acc.tilde_deriv(s) / acc.tilde_norm_sq();
        acc.advance();
    }
    return t;
}

namespace detail {

inline void require_mn_positive(const SobolevParams& sp, const char* which) {
    if (!(sp.M > Real(0)) || !(sp.N > Real(0)))
        throw std::domain_error(std::string(which) +
                                ": M > 0 and N > 0 required (limit not covered by the dominant-balance analysis)");
}

}  // namespace detail

/// value(n) = Q_n^(j)(-1) / P~_n^(j)(-1) in the tilde normalization (the
/// ratio is normalization invariant), limit j(j-1)/((beta+j+1)(beta+j+2)).
/// Requires M > 0 and N > 0; the degenerate limits fall outside the
/// dominant-balance analysis behind the stated constant.
inline ConvergenceTable derivative_ratio_scan(const JacobiParams& p, const SobolevParams& sp,
                                              long j, const std::vector<long>& ns) {
    if (j < 0) throw std::domain_error("derivative_ratio_scan: j >= 0");
    detail::require_mn_positive(sp, "derivative_ratio_scan");
    if (sp.a != Real(-1))
        throw std::domain_error("derivative_ratio_scan: a = -1 required (Jacobi endpoint forms)");
    ConvergenceTable t;
    t.kind = "deriv_ratio";
    t.meta = {{"alpha", detail::meta_decimal(p.alpha)}, {"beta", detail::meta_decimal(p.beta)},
              {"M", detail::meta_decimal(sp.M)},        {"N", detail::meta_decimal(sp.N)},
              {"j", std::to_string(j)}};
    Real limit = Real(j) * Real(j - 1) /
                 ((p.beta + Real(j) + Real(1)) * (p.beta + Real(j) + Real(2)));

    // Kernel orders needed by the Cramer system and the j-th derivative.
    detail::EndpointAccum acc(p);
    Real K00(0), K01(0), K11(0), K0j(0), K1j(0);
    std::size_t next = 0;
    while (next < ns.size() && ns[next] <= j) ++next;  // P~_n^(j)(-1) = 0 for n < j
    for (long i = 0; next < ns.size(); ++i) {
        if (i == ns[next]) {
            QEndpoint e = q_endpoint_from_kernels(sp.M, sp.N, acc.tilde_deriv(0),
                                                  acc.tilde_deriv(1), K00, K01, K11);
            Real pj = acc.tilde_deriv(j);
            Real qj = pj - sp.M * e.q_at_a * K0j - sp.N * e.dq_at_a * K1j;
            detail::push_row(t, i, qj / pj, limit);
            if (++next == ns.size()) break;
        }
        Real d0 = acc.tilde_deriv(0), d1 = acc.tilde_deriv(1), dj = acc.tilde_deriv(j);
        Real nsq = acc.tilde_norm_sq();
        K00 += d0 * d0 / nsq;
        K01 += d0 * d1 / nsq;
        K11 += d1 * d1 / nsq;
        K0j += d0 * dj / nsq;
        K1j += d1 * dj / nsq;
        acc.advance();
    }
    return t;
}

/// value(n) = ||Q_n||_S / ||P~_n||_mu in the tilde normalization, limit 1.
/// M = N = 0 is allowed as the degenerate baseline (value identically 1);
/// exactly one of M, N zero is rejected like derivative_ratio_scan.
inline ConvergenceTable norm_ratio_scan(const JacobiParams& p, const SobolevParams& sp,
                                        const std::vector<long>& ns) {
    bool degenerate = sp.M.is_zero() && sp.N.is_zero();
    if (!degenerate) detail::require_mn_positive(sp, "norm_ratio_scan");
    if (sp.a != Real(-1))
        throw std::domain_error("norm_ratio_scan: a = -1 required (Jacobi endpoint forms)");
    ConvergenceTable t;
    t.kind = "norm_ratio";
    t.meta = {{"alpha", detail::meta_decimal(p.alpha)},
              {"beta", detail::meta_decimal(p.beta)},
              {"M", detail::meta_decimal(sp.M)},
              {"N", detail::meta_decimal(sp.N)}};
    Real limit(1);

    detail::EndpointAccum acc(p);
    Real K00(0), K01(0), K11(0);
    std::size_t next = 0;
    for (long i = 0; next < ns.size(); ++i) {
        if (i == ns[next]) {
            Real d0 = acc.tilde_deriv(0), d1 = acc.tilde_deriv(1);
            QEndpoint e = q_endpoint_from_kernels(sp.M, sp.N, d0, d1, K00, K01, K11);
            Real nsq = acc.tilde_norm_sq();
            Real qn2 = nsq + sp.M * e.q_at_a * d0 + sp.N * e.dq_at_a * d1;
            if (!(qn2 > Real(0)))
                throw std::runtime_error("norm_ratio_scan: non-positive Sobolev norm");
            detail::push_row(t, i, sqrt(qn2 / nsq), limit);
            if (++next == ns.size()) break;
        }
        Real d0 = acc.tilde_deriv(0), d1 = acc.tilde_deriv(1);
        Real nsq = acc.tilde_norm_sq();
        K00 += d0 * d0 / nsq;
        K01 += d0 * d1 / nsq;
        K11 += d1 * d1 / nsq;
        acc.advance();
    }
    return t;
}

/// Least-squares slope of log|error| vs log n over the trailing half of the
/// rows (zero-error rows skipped). Returns nullopt (exact convergence) when
/// fewer than two usable rows remain; otherwise stores and returns the slope.
inline std::optional<Real> fit_decay(ConvergenceTable& t) {
    std::size_t start = t.rows.size() / 2;
    std::vector<std::pair<Real, Real>> pts;
    for (std::size_t i = start; i < t.rows.size(); ++i) {
        if (t.rows[i].abs_error.is_zero()) continue;
        pts.emplace_back(log(Real(t.rows[i].n)), log(t.rows[i].abs_error));
    }
    if (pts.size() < 2) {
        t.decay_exponent.reset();
        return std::nullopt;
    }
    Real sx(0), sy(0);
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
    }
    Real np(static_cast<long>(pts.size()));
    Real mx = sx / np, my = sy / np;
    Real sxy(0), sxx(0);
    for (auto& [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    Real slope = sxy / sxx;
    t.decay_exponent = slope;
    return slope;
}

/// Limit estimate by Aitken delta-squared over the trailing rows (the
/// geometric n-grid makes successive errors geometric). Uses the last
/// `rows` values and returns the acceleration of the final triple.
inline Real richardson_limit(const ConvergenceTable& t, std::size_t rows = 4) {
    if (t.rows.size() < 3) throw std::invalid_argument("richardson_limit: need >= 3 rows");
    rows = std::min(rows, t.rows.size());
    std::vector<Real> v;
    for (std::size_t i = t.rows.size() - rows; i < t.rows.size(); ++i)
        v.push_back(t.rows[i].value);
    Real best = v.back();
    for (std::size_t i = 0; i + 2 < v.size(); ++i) {
        Real d1 = v[i + 1] - v[i];
        Real d2 = v[i + 2] - v[i + 1];
        Real den = d2 - d1;
        if (!den.is_zero()) best = v[i + 2] - d2 * d2 / den;
    }
    return best;
}

}  // namespace opq

#endif
