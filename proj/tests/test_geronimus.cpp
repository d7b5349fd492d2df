#include <catch2/catch_amalgamated.hpp>

#include "opq/geronimus.hpp"
#include "opq/verify.hpp"

using namespace opq;

namespace {
const Real kTol = Real::pow2(-128);

Real pointwise(const Poly& lhs, const Poly& rhs, const std::vector<Real>& xs) {
    return detail::pointwise_residual(lhs, rhs, xs);
}
}  // namespace

TEST_CASE("make_jacobi_gg at (0,2) collapses to the Legendre system") {
    GGSystem g = make_jacobi_gg({Real(0), Real(2)});
    REQUIRE(g.gg.mu0 == Real(2));
    Poly p2 = gg_poly(g, 2);
    REQUIRE(abs(p2.coeff(0) + Real(1) / Real(3)) <= kTol);
    REQUIRE(abs(p2.coeff(1)) <= kTol);
    REQUIRE(p2.coeff(2) == Real(1));
    // measure identity spot check <(1+x)^2 * 1, 1>_gg = <1,1>_0 = 8/3
    Poly one = Poly::constant(Real(1));
    Real lhs = inner_mu(g.gg, shift_square(one, g.a), one);
    REQUIRE(abs(lhs - Real(8) / Real(3)) <= kTol);
    REQUIRE(abs(lhs - g.base.mu0) <= kTol);
}

TEST_CASE("gg_poly equals the gg-system recurrence construction") {
    GGSystem g = make_jacobi_gg({Real(1) / Real(2), Real(5) / Real(2)});
    for (long n = 0; n <= 25; ++n) {
        Poly a = gg_poly(g, n);
        Poly b = monic_poly(g.gg, n);
        REQUIRE(a.degree() == b.degree());
        REQUIRE(a.leading() == Real(1));
        for (std::size_t i = 0; i < a.size(); ++i)
            REQUIRE(abs(a.coeff(i) - b.coeff(i)) / (Real(1) + abs(b.coeff(i))) <= kTol);
    }
}

TEST_CASE("gg_norm_sq anchors") {
    GGSystem g = make_jacobi_gg({Real(0), Real(2)});
    REQUIRE(abs(gg_norm_sq(g, 0) - Real(2)) <= kTol);
    REQUIRE(abs(gg_norm_sq(g, 2) - Real(8) / Real(45)) <= kTol);
    // n = 3 closed form against direct quadrature
    Poly p3 = gg_poly(g, 3);
    Real quad = inner_mu(g.gg, p3, p3);
    REQUIRE(abs(gg_norm_sq(g, 3) - quad) / quad <= kTol);
    REQUIRE(abs(gg_norm_sq(g, 3) - g.C(3) * norm_sq(g.base, 1)) <= kTol);
}

TEST_CASE("three-term recurrence of the gg family") {
    GGSystem g = make_jacobi_gg({Real(0), Real(2)});
    // n = 1: sigma_nm1 must equal the Legendre gamma_1 = 1/3 from the display
    ThreeTerm tt = gg_three_term(g, 1);
    REQUIRE(abs(tt.sigma_nm1 - Real(1) / Real(3)) <= kTol);
    REQUIRE(tt.prov == Provenance::projection);
    // n = 0 base case: sigma_00 = B_0 - B_1 + beta_0 - a
    ThreeTerm t0 = gg_three_term(g, 0);
    REQUIRE(abs(t0.sigma_nn - (g.B(0) - g.B(1) + g.base.beta(0) - g.a)) <= kTol);

    GGSystem h = make_jacobi_gg({Real(1) / Real(2), Real(5) / Real(2)});
    auto xs = chebyshev_points(7);
    for (long n : {3L, 5L, 9L}) {
        ThreeTerm s = gg_three_term(h, n);
        REQUIRE(s.prov == Provenance::closed_form);
        Poly rhs =
            (Poly::monomial(1) - Poly::constant(h.a + s.sigma_nn)) * gg_poly(h, n) -
            s.sigma_nm1 * gg_poly(h, n - 1);
        REQUIRE(pointwise(gg_poly(h, n + 1), rhs, xs) <= kTol);
    }
}

TEST_CASE("five-term recurrence") {
    GGSystem g = make_jacobi_gg({Real(0), Real(2)});
    // n = 0: three active terms only
    FiveTerm f0 = gg_five_term(g, 0);
    REQUIRE(f0.prov == Provenance::projection);
    REQUIRE(f0.a_m1.is_zero());
    REQUIRE(f0.a_m2.is_zero());
    Poly lhs0 = shift_square(gg_poly(g, 0), g.a);
    Poly rhs0 = gg_poly(g, 2) + f0.a_pp1 * gg_poly(g, 1) + f0.a_p0 * gg_poly(g, 0);
    auto xs = chebyshev_points(9);
    REQUIRE(pointwise(lhs0, rhs0, xs) <= kTol);

    // n = 5 closed forms against the projection oracle
    FiveTerm f5 = gg_five_term(g, 5);
    REQUIRE(f5.prov == Provenance::closed_form);
    FiveTerm p5 = detail::project_five_term(g, gg_poly(g, 5), 5);
    REQUIRE(abs(f5.a_pp1 - p5.a_pp1) / (Real(1) + abs(p5.a_pp1)) <= kTol);
    REQUIRE(abs(f5.a_p0 - p5.a_p0) / (Real(1) + abs(p5.a_p0)) <= kTol);
    REQUIRE(abs(f5.a_m1 - p5.a_m1) / (Real(1) + abs(p5.a_m1)) <= kTol);
    REQUIRE(abs(f5.a_m2 - p5.a_m2) / (Real(1) + abs(p5.a_m2)) <= kTol);

    // closed-form trailing coefficient at n = 4
    FiveTerm f4 = gg_five_term(g, 4);
    Real expect = g.C(4) * norm_sq(g.base, 2) / (g.C(2) * norm_sq(g.base, 0));
    REQUIRE(abs(f4.a_m2 - expect) <= kTol);
    // a_m2 stays positive once all C_k in its ratio are positive
    for (long n = 4; n <= 20; ++n) REQUIRE(gg_five_term(g, n).a_m2 > Real(0));
}

TEST_CASE("base-to-gg connection") {
    GGSystem g = make_jacobi_gg({Real(0), Real(2)});
    BaseConnection b0 = base_to_gg_connection(g, 0);
    REQUIRE(abs(b0.s_pp1 - Real(2)) <= kTol);
    REQUIRE(abs(b0.s_p0 - Real(4) / Real(3)) <= kTol);
    // (1+x)^2 = P_2^gg + 2 P_1^gg + 4/3 P_0^gg, hand-verified expansion
    Poly rhs = gg_poly(g, 2) + b0.s_pp1 * gg_poly(g, 1) + b0.s_p0 * gg_poly(g, 0);
    REQUIRE(abs(rhs.coeff(0) - Real(1)) <= kTol);
    REQUIRE(abs(rhs.coeff(1) - Real(2)) <= kTol);
    REQUIRE(abs(rhs.coeff(2) - Real(1)) <= kTol);

    // n = 2: closed form equals the quadrature projection
    BaseConnection b2 = base_to_gg_connection(g, 2);
    Poly lhs = shift_square(monic_poly(g.base, 2), g.a);
    Real pr1 = inner_mu(g.gg, lhs, gg_poly(g, 3)) / gg_norm_sq(g, 3);
    Real pr0 = inner_mu(g.gg, lhs, gg_poly(g, 2)) / gg_norm_sq(g, 2);
    REQUIRE(abs(b2.s_pp1 - pr1) / (Real(1) + abs(pr1)) <= kTol);
    REQUIRE(abs(b2.s_p0 - pr0) / (Real(1) + abs(pr0)) <= kTol);

    // generic closed form vs the Jacobi specialization display
    GGSystem h = make_jacobi_gg({Real(1) / Real(2), Real(5) / Real(2)});
    for (long n : {2L, 3L, 7L}) {
        BaseConnection gen = base_to_gg_connection(h, n);
        BaseConnection disp = jacobi_connection_display(*h.jacobi, n);
        REQUIRE(abs(gen.s_pp1 - disp.s_pp1) / (Real(1) + abs(disp.s_pp1)) <= kTol);
        REQUIRE(abs(gen.s_p0 - disp.s_p0) / (Real(1) + abs(disp.s_p0)) <= kTol);
    }
}

TEST_CASE("generic constructor derives B and C by gg-orthogonality") {
    JacobiParams p{Real(1) / Real(2), Real(5) / Real(2)};
    GGSystem generic = make_gg(jacobi_system(p), jacobi_system({p.alpha, p.beta - Real(2)}),
                               Real(-1));
    REQUIRE_FALSE(generic.jacobi.has_value());
    for (long n = 0; n <= 10; ++n) {
        auto closed = gg_expansion_coeffs(p, n);
        REQUIRE(abs(generic.B(n) - closed.B) / (Real(1) + abs(closed.B)) <= kTol);
        REQUIRE(abs(generic.C(n) - closed.C) / (Real(1) + abs(closed.C)) <= kTol);
    }
    // small-n connection falls back to projection and still satisfies the identity
    auto xs = chebyshev_points(9);
    for (long n : {0L, 1L}) {
        BaseConnection bc = base_to_gg_connection(generic, n);
        REQUIRE(bc.prov == Provenance::projection);
        Poly lhs = shift_square(monic_poly(generic.base, n), generic.a);
        Poly rhs = gg_poly(generic, n + 2) + bc.s_pp1 * gg_poly(generic, n + 1) +
                   bc.s_p0 * gg_poly(generic, n);
        REQUIRE(pointwise(lhs, rhs, xs) <= kTol);
    }
}

TEST_CASE("measure identity on random pairs") {
    VerifyContext c = make_verify_context({Real(1) / Real(2), Real(5) / Real(2)}, Real(1),
                                          Real(1), 15, kTol);
    auto rep = verify_measure_identity(c, 20, 15);
    REQUIRE(rep.overall_pass);
    REQUIRE(rep.cases.size() == 20);
}

TEST_CASE("identity suites pass at moderate degree") {
    VerifyContext c = make_verify_context({Real(1) / Real(2), Real(5) / Real(2)}, Real(1),
                                          Real(1), 14, kTol);
    REQUIRE(verify_three_term(c).overall_pass);
    REQUIRE(verify_five_term(c).overall_pass);
    REQUIRE(verify_connection(c).overall_pass);
    REQUIRE(verify_norm_relation(c).overall_pass);
}
