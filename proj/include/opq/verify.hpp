#ifndef OPQ_VERIFY_HPP
#define OPQ_VERIFY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opq/asymptotics.hpp"
#include "opq/geronimus.hpp"
#include "opq/ortho.hpp"
#include "opq/sobolev.hpp"

namespace opq {

struct VerifyCase {
    std::string id;
    Real residual;
    Real tolerance;
    bool pass;
};

struct VerificationReport {
    std::string suite;
    std::vector<VerifyCase> cases;
    bool overall_pass = true;

    explicit VerificationReport(std::string name) : suite(std::move(name)) {}

    void add(std::string id, Real residual, const Real& tol) {
        bool pass = residual <= tol;
        overall_pass = overall_pass && pass;
        cases.push_back({std::move(id), std::move(residual), tol, pass});
    }
};

/// Chebyshev-spaced sample points cos(pi (2i+1) / (2m)) on (-1, 1).
inline std::vector<Real> chebyshev_points(int m) {
    std::vector<Real> xs;
    Real pi = Real::pi();
    for (int i = 0; i < m; ++i) xs.push_back(cos(pi * Real(2 * i + 1) / Real(2 * m)));
    return xs;
}

namespace detail {

/// max over sample points of |lhs - rhs| / (1 + |lhs|).
inline Real pointwise_residual(const Poly& lhs, const Poly& rhs, const std::vector<Real>& xs) {
    Real worst(0);
    for (const Real& x : xs) {
        Real l = lhs.eval(x);
        Real r = abs(l - rhs.eval(x)) / (Real(1) + abs(l));
        if (r > worst) worst = r;
    }
    return worst;
}

/// |a - b| / (1 + |b|): relative against b, stable through exact zeros.
inline Real rel_diff(const Real& a, const Real& b) { return abs(a - b) / (Real(1) + abs(b)); }

/// Coefficientwise rel_diff maximum.
inline Real poly_rel_diff(const Poly& a, const Poly& b) {
    Real worst(0);
    std::size_t m = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        Real r = rel_diff(a.coeff(i), b.coeff(i));
        if (r > worst) worst = r;
    }
    return worst;
}

/// Deterministic small-integer-coefficient polynomial stream (plain 64-bit
/// xorshift; avoids distribution portability concerns).
class PolyStream {
public:
    explicit PolyStream(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return state_;
    }

    Poly poly(long max_degree) {
        long deg = static_cast<long>(next() % static_cast<std::uint64_t>(max_degree + 1));
        std::vector<Real> c;
        for (long i = 0; i <= deg; ++i)
            c.push_back(Real(static_cast<long>(next() % 19) - 9));
        Poly p{std::move(c)};
        return p.is_zero() ? Poly::constant(Real(1)) : p;
    }

private:
    std::uint64_t state_;
};

}  // namespace detail

/// Shared inputs of every verification suite.
struct VerifyContext {
    GGSystem g;
    SobolevSystem sob;
    long n_max;
    Real tol;
    std::uint64_t seed = 12345;
    int sample_points = 11;
};

inline VerifyContext make_verify_context(const JacobiParams& p, Real M, Real N, long n_max,
                                         Real tol, std::uint64_t seed = 12345) {
    return VerifyContext{make_jacobi_gg(p), make_jacobi_sobolev(p, std::move(M), std::move(N)),
                         n_max, std::move(tol), seed};
}

/// Three-term recurrence of the gg family:
/// P_{n+1}^gg = (x - a - sigma_nn) P_n^gg - sigma_{n,n-1} P_{n-1}^gg.
inline VerificationReport verify_three_term(const VerifyContext& c) {
    VerificationReport r{"three_term"};
    auto xs = chebyshev_points(c.sample_points);
    for (long n = 0; n + 1 <= c.n_max; ++n) {
        ThreeTerm tt = gg_three_term(c.g, n);
        Poly rhs = (Poly::monomial(1) - Poly::constant(c.g.a + tt.sigma_nn)) * gg_poly(c.g, n);
        if (n >= 1) rhs = rhs - tt.sigma_nm1 * gg_poly(c.g, n - 1);
        r.add("n=" + std::to_string(n), detail::pointwise_residual(gg_poly(c.g, n + 1), rhs, xs),
              c.tol);
    }
    return r;
}

/// Five-term recurrence: (x-a)^2 P_n^gg expanded over the gg basis.
inline VerificationReport verify_five_term(const VerifyContext& c) {
    VerificationReport r{"five_term"};
    auto xs = chebyshev_points(c.sample_points);
    for (long n = 0; n + 2 <= c.n_max; ++n) {
        FiveTerm ft = gg_five_term(c.g, n);
        Poly lhs = shift_square(gg_poly(c.g, n), c.g.a);
        Poly rhs = gg_poly(c.g, n + 2) + ft.a_pp1 * gg_poly(c.g, n + 1) + ft.a_p0 * gg_poly(c.g, n);
        if (n >= 1) rhs = rhs + ft.a_m1 * gg_poly(c.g, n - 1);
        if (n >= 2) rhs = rhs + ft.a_m2 * gg_poly(c.g, n - 2);
        r.add("n=" + std::to_string(n), detail::pointwise_residual(lhs, rhs, xs), c.tol);
    }
    return r;
}

/// Base-to-gg connection: (x-a)^2 P_n = P_{n+2}^gg + s_pp1 P_{n+1}^gg + s_p0 P_n^gg.
inline VerificationReport verify_connection(const VerifyContext& c) {
    VerificationReport r{"connection"};
    auto xs = chebyshev_points(c.sample_points);
    for (long n = 0; n + 2 <= c.n_max; ++n) {
        BaseConnection bc = base_to_gg_connection(c.g, n);
        Poly lhs = shift_square(monic_poly(c.g.base, n), c.g.a);
        Poly rhs = gg_poly(c.g, n + 2) + bc.s_pp1 * gg_poly(c.g, n + 1) + bc.s_p0 * gg_poly(c.g, n);
        r.add("n=" + std::to_string(n), detail::pointwise_residual(lhs, rhs, xs), c.tol);
    }
    return r;
}

/// Norm relation ||P_n^gg||^2_gg = C_n ||P_{n-2}||^2_0 against gg quadrature.
inline VerificationReport verify_norm_relation(const VerifyContext& c) {
    VerificationReport r{"norm_relation"};
    for (long n = 2; n <= c.n_max; ++n) {
        Poly p = gg_poly(c.g, n);
        Real quad = inner_mu(c.g.gg, p, p);
        Real closed = gg_norm_sq(c.g, n);
        r.add("n=" + std::to_string(n), abs(closed - quad) / quad, c.tol);
    }
    return r;
}

/// Q-to-gg connection, the statements that hold exactly: the four
/// closed-form coefficients against the gg-projection oracle, and the full
/// expansion (those coefficients plus the k <= n-3 cross-term tail) pointwise.
inline VerificationReport verify_qq_connection(const VerifyContext& c) {
    VerificationReport r{"qq_connection"};
    auto xs = chebyshev_points(c.sample_points);
    for (long n = 0; n + 2 <= c.n_max; ++n) {
        Poly qn = q_poly(c.sob, n);
        QQConnection qc = qq_connection(c.sob, c.g, n);
        FiveTerm pr = detail::project_five_term(c.g, qn, n);
        Real cres = detail::rel_diff(qc.a_pp1, pr.a_pp1);
        cres = std::max(cres, detail::rel_diff(qc.a_p0, pr.a_p0), std::less<Real>{});
        if (n >= 1) cres = std::max(cres, detail::rel_diff(qc.a_m1, pr.a_m1), std::less<Real>{});
        if (n >= 2) cres = std::max(cres, detail::rel_diff(qc.a_m2, pr.a_m2), std::less<Real>{});
        r.add("coeffs/n=" + std::to_string(n), cres, c.tol);

        Poly lhs = shift_square(qn, c.g.a);
        Poly rhs = gg_poly(c.g, n + 2) + qc.a_pp1 * gg_poly(c.g, n + 1) + qc.a_p0 * gg_poly(c.g, n);
        if (n >= 1) rhs = rhs + qc.a_m1 * gg_poly(c.g, n - 1);
        if (n >= 2) rhs = rhs + qc.a_m2 * gg_poly(c.g, n - 2);
        for (long k = 0; k + 3 <= n; ++k)
            rhs = rhs + qq_tail_coeff(c.sob, c.g, n, k) * gg_poly(c.g, k);
        r.add("full/n=" + std::to_string(n), detail::pointwise_residual(lhs, rhs, xs), c.tol);
    }
    return r;
}

/// Q-to-gg connection in its five-term truncated form, no tail. Not an
/// exact identity for M, N > 0 (the dropped components are nonzero); kept
/// for the acceptance suite, which reports it as stated.
inline VerificationReport verify_qq_truncated(const VerifyContext& c) {
    VerificationReport r{"qq_truncated"};
    auto xs = chebyshev_points(c.sample_points);
    for (long n = 0; n + 2 <= c.n_max; ++n) {
        Poly qn = q_poly(c.sob, n);
        QQConnection qc = qq_connection(c.sob, c.g, n);
        Poly lhs = shift_square(qn, c.g.a);
        Poly rhs = gg_poly(c.g, n + 2) + qc.a_pp1 * gg_poly(c.g, n + 1) + qc.a_p0 * gg_poly(c.g, n);
        if (n >= 1) rhs = rhs + qc.a_m1 * gg_poly(c.g, n - 1);
        if (n >= 2) rhs = rhs + qc.a_m2 * gg_poly(c.g, n - 2);
        r.add("n=" + std::to_string(n), detail::pointwise_residual(lhs, rhs, xs), c.tol);
    }
    return r;
}

/// |<Q_n, x^m>_S| / (||Q_n||_S ||x^m||_S) for m < n.
inline VerificationReport verify_s_orthogonality(const VerifyContext& c) {
    VerificationReport r{"s_orthogonality"};
    for (long n = 1; n <= c.n_max; ++n) {
        Poly qn = q_poly(c.sob, n);
        Real qs = sqrt(sobolev_inner(c.sob, qn, qn));
        Real worst(0);
        for (long m = 0; m < n; ++m) {
            Poly xm = Poly::monomial(static_cast<std::size_t>(m));
            Real denom = qs * sqrt(sobolev_inner(c.sob, xm, xm));
            Real v = abs(sobolev_inner(c.sob, qn, xm)) / denom;
            if (v > worst) worst = v;
        }
        r.add("n=" + std::to_string(n), worst, c.tol);
    }
    return r;
}

/// Gram-Schmidt oracle equals the closed constructions under all three inner
/// products (mu -> monic_poly, gg -> gg_poly, S -> q_poly), coefficientwise.
inline VerificationReport verify_oracle_equivalence(const VerifyContext& c, long n_max = 15) {
    VerificationReport r{"oracle_equivalence"};
    const OrthoSystem& base = c.g.base;
    auto mu_form = [&](const Poly& p, const Poly& q) { return inner_mu(base, p, q); };
    auto gg_form = [&](const Poly& p, const Poly& q) { return inner_mu(c.g.gg, p, q); };
    auto s_form = [&](const Poly& p, const Poly& q) { return sobolev_inner(c.sob, p, q); };

    auto gs_mu = gram_schmidt_oracle(mu_form, n_max);
    auto gs_gg = gram_schmidt_oracle(gg_form, n_max);
    auto gs_s = gram_schmidt_oracle(s_form, n_max);
    for (long n = 0; n <= n_max; ++n) {
        std::size_t un = static_cast<std::size_t>(n);
        r.add("mu/n=" + std::to_string(n),
              detail::poly_rel_diff(gs_mu[un], monic_poly(base, n)), c.tol);
        r.add("gg/n=" + std::to_string(n), detail::poly_rel_diff(gs_gg[un], gg_poly(c.g, n)),
              c.tol);
        r.add("S/n=" + std::to_string(n), detail::poly_rel_diff(gs_s[un], q_poly(c.sob, n)),
              c.tol);
    }
    return r;
}

/// <(x-a)^2 p, q>_gg = <p, q>_0 on random polynomial pairs.
inline VerificationReport verify_measure_identity(const VerifyContext& c, int pairs = 20,
                                                  long max_degree = 15) {
    VerificationReport r{"measure_identity"};
    detail::PolyStream rng(c.seed);
    for (int i = 0; i < pairs; ++i) {
        Poly p = rng.poly(max_degree);
        Poly q = rng.poly(max_degree);
        Real lhs = inner_mu(c.g.gg, shift_square(p, c.g.a), q);
        Real rhs = inner_mu(c.g.base, p, q);
        Real denom = Real(1) + abs(rhs);
        r.add("pair=" + std::to_string(i), abs(lhs - rhs) / denom, c.tol);
    }
    return r;
}

/// 3x3 determinantal construction of Q_n equals the kernel representation.
inline VerificationReport verify_determinant_formula(const VerifyContext& c, long n_max = 20) {
    VerificationReport r{"determinant_formula"};
    for (long n = 0; n <= n_max; ++n)
        r.add("n=" + std::to_string(n),
              detail::poly_rel_diff(q_poly_determinant(c.sob, n), q_poly(c.sob, n)), c.tol);
    return r;
}

/// Reproducing property <K_n(., a), p>_0 = p(a) for random p of degree <= n.
inline VerificationReport verify_kernel_reproducing(const VerifyContext& c, long n = 12,
                                                    int trials = 10) {
    VerificationReport r{"kernel_reproducing"};
    detail::PolyStream rng(c.seed + 1);
    Poly kn = cd_kernel_poly(c.sob.base, n, 0, c.sob.prm.a);
    for (int i = 0; i < trials; ++i) {
        Poly p = rng.poly(n);
        Real lhs = inner_mu(c.sob.base, kn, p);
        Real rhs = p.eval(c.sob.prm.a);
        r.add("trial=" + std::to_string(i), abs(lhs - rhs) / (Real(1) + abs(rhs)), c.tol);
    }
    return r;
}

/// The cmd_verify collection: the recurrence/connection/norm identity suites
/// plus S-orthogonality and oracle equivalence.
inline std::vector<VerificationReport> run_verify_suites(const VerifyContext& c) {
    std::vector<VerificationReport> out;
    out.push_back(verify_three_term(c));
    out.push_back(verify_five_term(c));
    out.push_back(verify_connection(c));
    out.push_back(verify_qq_connection(c));
    out.push_back(verify_norm_relation(c));
    out.push_back(verify_s_orthogonality(c));
    out.push_back(verify_oracle_equivalence(c, std::min<long>(c.n_max, 15)));
    return out;
}

}  // namespace opq

#endif
