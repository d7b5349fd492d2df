#ifndef OPQ_GERONIMUS_HPP
#define OPQ_GERONIMUS_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>

#include "opq/jacobi.hpp"
#include "opq/ortho.hpp"
#include "opq/poly.hpp"
#include "opq/real.hpp"

namespace opq {

/// How a coefficient was obtained: the generic-n closed form, or the
/// orthogonal projection it encodes (small n, where the closed forms
/// reference negative indices or vanishing C_k).
enum class Provenance { closed_form, projection };

inline const char* to_string(Provenance p) {
    return p == Provenance::closed_form ? "closed_form" : "projection";
}

/// Double Geronimus pair: base system for mu, transformed system for mu_gg
/// with (x-a)^2 dmu_gg = dmu, and the expansion coefficients of
///   P_n^gg = P_n + B_n P_{n-1} + C_n P_{n-2}
/// (B_0 = C_0 = C_1 = 0, C_n != 0 for n >= 2).
struct GGSystem {
    OrthoSystem base;
    OrthoSystem gg;
    Real a;
    std::function<Real(long)> B;
    std::function<Real(long)> C;
    std::optional<JacobiParams> jacobi;  // set for the Jacobi instance (a = -1)
};

/// Jacobi instance at a = -1: the gg measure is (1-x)^alpha (1+x)^(beta-2).
inline GGSystem make_jacobi_gg(const JacobiParams& p) {
    p.require_gg();
    JacobiParams shifted{p.alpha, p.beta - Real(2)};
    JacobiParams copy = p;
    return GGSystem{jacobi_system(p),
                    jacobi_system(shifted),
                    Real(-1),
                    [copy](long n) { return gg_expansion_coeffs(copy, n).B; },
                    [copy](long n) { return gg_expansion_coeffs(copy, n).C; },
                    copy};
}

namespace detail {

/// <p, q>_gg by quadrature on the gg system.
inline Real inner_gg(const GGSystem& g, const Poly& p, const Poly& q) {
    return inner_mu(g.gg, p, q);
}

struct BCCache {
    std::mutex m;
    std::map<long, std::pair<Real, Real>> bc;
};

}  // namespace detail

/// Generic constructor: B_n, C_n are derived by solving the two
/// gg-orthogonality conditions of P_n + B_n P_{n-1} + C_n P_{n-2} against
/// P_{n-1}^gg and P_{n-2}^gg (quadrature inner products). The caller asserts
/// that (x-a)^2 dmu_gg = dmu holds for the supplied pair.
inline GGSystem make_gg(OrthoSystem base, OrthoSystem gg, Real a) {
    auto cache = std::make_shared<detail::BCCache>();
    auto base_sp = std::make_shared<OrthoSystem>(std::move(base));
    auto gg_sp = std::make_shared<OrthoSystem>(std::move(gg));

    auto solve = [cache, base_sp, gg_sp](long n) -> std::pair<Real, Real> {
        if (n <= 0) return {Real(0), Real(0)};
        {
            std::lock_guard<std::mutex> lock(cache->m);
            auto it = cache->bc.find(n);
            if (it != cache->bc.end()) return it->second;
        }
        auto polys = monic_polys(*base_sp, n);
        auto ggpolys = monic_polys(*gg_sp, n);
        std::pair<Real, Real> out{Real(0), Real(0)};
        if (n == 1) {
            Real denom = inner_mu(*gg_sp, polys[0], ggpolys[0]);
            out.first = -inner_mu(*gg_sp, polys[1], ggpolys[0]) / denom;
        } else {
            // [<P_{n-1},G_{n-1}> <P_{n-2},G_{n-1}>] [B]   [-<P_n,G_{n-1}>]
            // [<P_{n-1},G_{n-2}> <P_{n-2},G_{n-2}>] [C] = [-<P_n,G_{n-2}>]
            std::size_t un = static_cast<std::size_t>(n);
            Real a11 = inner_mu(*gg_sp, polys[un - 1], ggpolys[un - 1]);
            Real a12 = inner_mu(*gg_sp, polys[un - 2], ggpolys[un - 1]);
            Real a21 = inner_mu(*gg_sp, polys[un - 1], ggpolys[un - 2]);
            Real a22 = inner_mu(*gg_sp, polys[un - 2], ggpolys[un - 2]);
            Real r1 = -inner_mu(*gg_sp, polys[un], ggpolys[un - 1]);
            Real r2 = -inner_mu(*gg_sp, polys[un], ggpolys[un - 2]);
            Real det = a11 * a22 - a12 * a21;
            if (det.is_zero())
                throw std::runtime_error("make_gg: singular orthogonality system at n = " +
                                         std::to_string(n));
            out.first = (r1 * a22 - a12 * r2) / det;
            out.second = (a11 * r2 - r1 * a21) / det;
        }
        std::lock_guard<std::mutex> lock(cache->m);
        cache->bc.emplace(n, out);
        return out;
    };

    return GGSystem{*base_sp,
                    *gg_sp,
                    std::move(a),
                    [solve](long n) { return solve(n).first; },
                    [solve](long n) { return solve(n).second; },
                    std::nullopt};
}

/// P_n^gg = P_n + B_n P_{n-1} + C_n P_{n-2}.
inline Poly gg_poly(const GGSystem& g, long n) {
    if (n < 0) throw std::invalid_argument("gg_poly: n >= 0");
    Poly out = monic_poly(g.base, n);
    if (n >= 1) out = out + g.B(n) * monic_poly(g.base, n - 1);
    if (n >= 2) out = out + g.C(n) * monic_poly(g.base, n - 2);
    return out;
}

/// ||P_n^gg||^2_gg = C_n ||P_{n-2}||^2_0 for n >= 2; direct gg quadrature
/// for n = 0, 1.
inline Real gg_norm_sq(const GGSystem& g, long n) {
    if (n < 0) throw std::invalid_argument("gg_norm_sq: n >= 0");
    if (n >= 2) return g.C(n) * norm_sq(g.base, n - 2);
    Poly p = gg_poly(g, n);
    return detail::inner_gg(g, p, p);
}

/// Coefficients of P_{n+1}^gg = (x - a - sigma_nn) P_n^gg - sigma_nm1 P_{n-1}^gg.
struct ThreeTerm {
    Real sigma_nn;
    Real sigma_nm1;
    Provenance prov;
};

inline ThreeTerm gg_three_term(const GGSystem& g, long n) {
    if (n < 0) throw std::invalid_argument("gg_three_term: n >= 0");
    Real sigma_nn = g.B(n) - g.B(n + 1) + g.base.beta(n) - g.a;
    if (n == 0) return {std::move(sigma_nn), Real(0), Provenance::closed_form};
    if (n >= 3) {
        Real sigma_nm1 =
            g.C(n) * norm_sq(g.base, n - 2) / (g.C(n - 1) * norm_sq(g.base, n - 3));
        return {std::move(sigma_nn), std::move(sigma_nm1), Provenance::closed_form};
    }
    // n = 1, 2: the closed-form ratio hits C_1 = 0 / negative indices; use the
    // norm-ratio identity sigma_{n,n-1} = ||P_n^gg||^2 / ||P_{n-1}^gg||^2.
    Real sigma_nm1 = gg_norm_sq(g, n) / gg_norm_sq(g, n - 1);
    return {std::move(sigma_nn), std::move(sigma_nm1), Provenance::projection};
}

/// Coefficients of
/// (x-a)^2 P_n^gg = P_{n+2}^gg + a_pp1 P_{n+1}^gg + a_p0 P_n^gg
///                  + a_m1 P_{n-1}^gg + a_m2 P_{n-2}^gg.
struct FiveTerm {
    Real a_pp1;
    Real a_p0;
    Real a_m1;
    Real a_m2;
    Provenance prov;
};

namespace detail {

/// Projection of (x-a)^2 * lhs onto the gg basis entries n+1 .. n-2.
inline FiveTerm project_five_term(const GGSystem& g, const Poly& lhs, long n) {
    Poly shifted = shift_square(lhs, g.a);
    FiveTerm out{Real(0), Real(0), Real(0), Real(0), Provenance::projection};
    auto coef = [&](long k) {
        Poly pk = gg_poly(g, k);
        return inner_gg(g, shifted, pk) / gg_norm_sq(g, k);
    };
    out.a_pp1 = coef(n + 1);
    out.a_p0 = coef(n);
    if (n >= 1) out.a_m1 = coef(n - 1);
    if (n >= 2) out.a_m2 = coef(n - 2);
    return out;
}

}  // namespace detail

inline FiveTerm gg_five_term(const GGSystem& g, long n) {
    if (n < 0) throw std::invalid_argument("gg_five_term: n >= 0");
    if (n < 4) return detail::project_five_term(g, gg_poly(g, n), n);
    Real Nn = norm_sq(g.base, n), Nm1 = norm_sq(g.base, n - 1), Nm2 = norm_sq(g.base, n - 2),
         Nm3 = norm_sq(g.base, n - 3), Nm4 = norm_sq(g.base, n - 4);
    Real Bn = g.B(n), Bn1 = g.B(n + 1), Bm1 = g.B(n - 1);
    Real Cn = g.C(n), Cn1 = g.C(n + 1), Cm1 = g.C(n - 1), Cm2 = g.C(n - 2);
    FiveTerm out{Real(0), Real(0), Real(0), Real(0), Provenance::closed_form};
    out.a_pp1 = (Cn1 * Bn * Nm1 + Bn1 * Nn) / (Cn1 * Nm1);
    out.a_p0 = (Nn + Bn * Bn * Nm1 + Cn * Cn * Nm2) / (Cn * Nm2);
    out.a_m1 = (Bn * Nm1 + Bm1 * Cn * Nm2) / (Cm1 * Nm3);
    out.a_m2 = Cn * Nm2 / (Cm2 * Nm4);
    return out;
}

/// Coefficients of (x-a)^2 P_n = P_{n+2}^gg + s_pp1 P_{n+1}^gg + s_p0 P_n^gg.
struct BaseConnection {
    Real s_pp1;
    Real s_p0;
    Provenance prov;
};

/// The Jacobi specialization of the connection display at a = -1, valid for
/// all n >= 0 (n = 0 uses the cancelled forms).
inline BaseConnection jacobi_connection_display(const JacobiParams& p, long n) {
    p.require_gg();
    const Real &a = p.alpha, &b = p.beta;
    if (n == 0) {
        Real s_pp1 = Real(4) * b / (a + b + Real(2));
        Real s_p0 = Real(4) * (b - Real(1)) * b / ((a + b) * (a + b + Real(1)));
        return {std::move(s_pp1), std::move(s_p0), Provenance::closed_form};
    }
    Real t = Real(2 * n) + a + b;
    Real s_pp1 = Real(4) * (Real(n) + b) * (Real(n) + a + b) / (t * (t + Real(2)));
    Real s_p0 = Real(4) * (Real(n) + b - Real(1)) * (Real(n) + b) * (Real(n) + a + b - Real(1)) *
                (Real(n) + a + b) / ((t - Real(1)) * t * t * (t + Real(1)));
    return {std::move(s_pp1), std::move(s_p0), Provenance::closed_form};
}

inline BaseConnection base_to_gg_connection(const GGSystem& g, long n) {
    if (n < 0) throw std::invalid_argument("base_to_gg_connection: n >= 0");
    if (n >= 2) {
        Real s_pp1 = g.B(n + 1) * norm_sq(g.base, n) / (g.C(n + 1) * norm_sq(g.base, n - 1));
        Real s_p0 = norm_sq(g.base, n) / (g.C(n) * norm_sq(g.base, n - 2));
        return {std::move(s_pp1), std::move(s_p0), Provenance::closed_form};
    }
    if (g.jacobi) return jacobi_connection_display(*g.jacobi, n);
    // Generic small n: project (x-a)^2 P_n onto the gg basis.
    Poly shifted = shift_square(monic_poly(g.base, n), g.a);
    Real s_pp1 = detail::inner_gg(g, shifted, gg_poly(g, n + 1)) / gg_norm_sq(g, n + 1);
    Real s_p0 = detail::inner_gg(g, shifted, gg_poly(g, n)) / gg_norm_sq(g, n);
    return {std::move(s_pp1), std::move(s_p0), Provenance::projection};
}

}  // namespace opq

#endif
