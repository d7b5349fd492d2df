#include <catch2/catch_amalgamated.hpp>

#include "opq/asymptotics.hpp"

using namespace opq;

namespace {
const Real kTol = Real::pow2(-128);
}

TEST_CASE("geometric grid") {
    auto g = geometric_grid(4096);
    REQUIRE(g.front() == 16);
    REQUIRE(g.back() == 4096);
    for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g[i] > g[i - 1]);
    // exact powers of two land exactly
    REQUIRE(std::find(g.begin(), g.end(), 1024) != g.end());
    REQUIRE(std::find(g.begin(), g.end(), 2048) != g.end());
    auto small = geometric_grid(200);
    REQUIRE(small.back() <= 200);
    REQUIRE(geometric_grid(8) == std::vector<long>{8});
}

TEST_CASE("gamma_ratio_scan") {
    // k = l: identical Gammas, value constant 1
    auto t0 = gamma_ratio_scan(3, 3, {16, 32, 64});
    for (const auto& r : t0.rows) {
        REQUIRE(r.value == Real(1));
        REQUIRE(r.abs_error.is_zero());
    }
    // k = 2, l = 0 at n = 10: 100 Gamma(10)/Gamma(12) = 10/11
    auto t1 = gamma_ratio_scan(2, 0, {10});
    REQUIRE(abs(t1.rows[0].value - Real(10) / Real(11)) <= kTol);
    REQUIRE(t1.rows[0].limit == Real(1));
    // limit 1 with decay exponent near -1
    auto t2 = gamma_ratio_scan(2, 0, geometric_grid(4096));
    auto slope = fit_decay(t2);
    REQUIRE(slope.has_value());
    REQUIRE(*slope >= Real(-11) / Real(10));
    REQUIRE(*slope <= Real(-9) / Real(10));
    REQUIRE(abs(t2.rows.back().value - Real(1)) <= Real(1) / Real(1000));
}

TEST_CASE("endpoint_limit_scan") {
    // alpha = beta = 0, k = 0: limit 1 and the degenerate exact value 1
    auto t = endpoint_limit_scan({Real(0), Real(0)}, 0, {16, 50, 64});
    REQUIRE(t.rows[0].limit == Real(1));
    REQUIRE(abs(t.rows[1].value - Real(1)) <= kTol);  // n = 50 exactly 1
    // alpha = 0, beta = 1, k = 1: limit -1/4
    auto t2 = endpoint_limit_scan({Real(0), Real(1)}, 1, {64});
    REQUIRE(abs(t2.rows[0].limit + Real(1) / Real(4)) <= kTol);
}

TEST_CASE("norm_limit_scan") {
    auto t = norm_limit_scan({Real(0), Real(0)}, {1, 16});
    REQUIRE(t.rows[0].limit == Real(1));
    REQUIRE(abs(t.rows[0].value - Real(2) / Real(3)) <= kTol);  // n = 1 anchor
    auto t2 = norm_limit_scan({Real(1), Real(0)}, {16});
    REQUIRE(abs(t2.rows[0].limit - Real(2)) <= kTol);
}

TEST_CASE("kernel_limit_scan") {
    // alpha = beta = 0, k = s = 0: limit 1/2
    auto t = kernel_limit_scan({Real(0), Real(0)}, 0, 0, {16, 64});
    REQUIRE(abs(t.rows[0].limit - Real(1) / Real(2)) <= kTol);
    // alpha = 0, beta = 1, k = 1, s = 0: limit -1/48 from the closed form
    // (-1)^(k+s) / (2^(a+b+k+s+1) (b+k+s+1) G(b+k+1) G(b+s+1)) with b+k+s+1 = 3
    auto t2 = kernel_limit_scan({Real(0), Real(1)}, 1, 0, {16});
    REQUIRE(abs(t2.rows[0].limit + Real(1) / Real(48)) <= kTol);
    // (k,s) <-> (s,k) rows identical
    auto a = kernel_limit_scan({Real(0), Real(1)}, 1, 0, {16, 32, 64});
    auto b = kernel_limit_scan({Real(0), Real(1)}, 0, 1, {16, 32, 64});
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        REQUIRE(a.rows[i].n == b.rows[i].n);
        REQUIRE(a.rows[i].value == b.rows[i].value);
    }
    // accumulated sums agree with the direct kernel evaluation
    JacobiParams p{Real(0), Real(1)};
    auto t3 = kernel_limit_scan(p, 1, 0, {20});
    Real direct = jacobi_kernel_minus1(p, 19, 1, 0) / pow(Real(20), Real(2 * 1 + 2 * 1 + 0 + 2));
    REQUIRE(abs(t3.rows[0].value - direct) / (Real(1) + abs(direct)) <= kTol);
}

TEST_CASE("derivative_ratio_scan") {
    JacobiParams p{Real(0), Real(1)};
    SobolevParams mn{Real(1), Real(1), Real(-1)};
    // j = 0: limit 0
    auto t0 = derivative_ratio_scan(p, mn, 0, {16, 32});
    REQUIRE(t0.rows[0].limit.is_zero());
    // j = 2, beta = 1: limit 1/10 (the figure configuration)
    auto t2 = derivative_ratio_scan(p, mn, 2, {16, 32});
    REQUIRE(abs(t2.rows[0].limit - Real(1) / Real(10)) <= kTol);
    // j = 3, beta = 0: limit 3/10
    auto t3 = derivative_ratio_scan({Real(0), Real(0)}, mn, 3, {16});
    REQUIRE(abs(t3.rows[0].limit - Real(3) / Real(10)) <= kTol);
    // value agrees with the per-n endpoint route (normalization invariance)
    SobolevSystem sob = make_jacobi_sobolev(p, Real(1), Real(1));
    for (std::size_t i = 0; i < t2.rows.size(); ++i) {
        long n = t2.rows[i].n;
        Real monic_route = q_deriv_at_a(sob, n, 2) /
                           (scaled_derivative_minus1(p, n, 2) / scaled_factor(p, n));
        REQUIRE(abs(t2.rows[i].value - monic_route) / (Real(1) + abs(monic_route)) <= kTol);
    }
    // degenerate masses are rejected
    REQUIRE_THROWS_MATCHES(
        derivative_ratio_scan(p, SobolevParams{Real(0), Real(1), Real(-1)}, 2, {16}),
        std::domain_error, Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("not covered")));
    REQUIRE_THROWS_AS(derivative_ratio_scan(p, SobolevParams{Real(1), Real(0), Real(-1)}, 2, {16}),
                      std::domain_error);
}

TEST_CASE("norm_ratio_scan") {
    JacobiParams p{Real(0), Real(1)};
    // degenerate baseline M = N = 0: value identically 1
    auto t0 = norm_ratio_scan(p, SobolevParams{Real(0), Real(0), Real(-1)}, {16, 32, 64});
    for (const auto& r : t0.rows) REQUIRE(abs(r.value - Real(1)) <= kTol);
    // M = N = 1: limit 1, values positive, anchored to the per-n norm route
    SobolevParams mn{Real(1), Real(1), Real(-1)};
    auto t = norm_ratio_scan(p, mn, {16, 64});
    REQUIRE(t.rows[0].limit == Real(1));
    SobolevSystem sob = make_jacobi_sobolev(p, Real(1), Real(1));
    for (const auto& r : t.rows) {
        REQUIRE(r.value > Real(0));
        Real monic_route = sqrt(q_norm_sq(sob, r.n) / norm_sq(sob.base, r.n));
        REQUIRE(abs(r.value - monic_route) / monic_route <= kTol);
    }
    // value >= 1 whenever the cross term M Q(a)P(a) + N Q'(a)P'(a) is >= 0
    for (const auto& r : t.rows) {
        QEndpoint e = q_endpoint(sob, r.n);
        Real cross = e.q_at_a * scaled_derivative_minus1(p, r.n, 0) / scaled_factor(p, r.n) +
                     e.dq_at_a * scaled_derivative_minus1(p, r.n, 1) / scaled_factor(p, r.n);
        if (cross >= Real(0)) REQUIRE(r.value >= Real(1));
    }
    // small-n anchor at (0,2): scan row n = 1 equals the norm-route value
    JacobiParams j02{Real(0), Real(2)};
    auto t1 = norm_ratio_scan(j02, mn, {1});
    SobolevSystem sob2 = make_jacobi_sobolev(j02, Real(1), Real(1));
    Real anchor = sqrt(q_norm_sq(sob2, 1) / norm_sq(sob2.base, 1));
    REQUIRE(abs(t1.rows[0].value - anchor) / anchor <= kTol);
    // exactly one vanishing mass is rejected
    REQUIRE_THROWS_AS(norm_ratio_scan(p, SobolevParams{Real(0), Real(1), Real(-1)}, {16}),
                      std::domain_error);
}

TEST_CASE("scan errors eventually decrease monotonically") {
    auto grid = geometric_grid(4096);
    auto monotone_from_64 = [](const ConvergenceTable& t) {
        for (std::size_t i = 1; i < t.rows.size(); ++i) {
            if (t.rows[i - 1].n < 64) continue;
            if (!(t.rows[i].abs_error < t.rows[i - 1].abs_error)) return false;
        }
        return true;
    };
    REQUIRE(monotone_from_64(gamma_ratio_scan(2, 0, grid)));
    REQUIRE(monotone_from_64(kernel_limit_scan({Real(0), Real(1)}, 1, 0, grid)));
    REQUIRE(monotone_from_64(
        norm_ratio_scan({Real(0), Real(1)}, SobolevParams{Real(1), Real(1), Real(-1)}, grid)));
}

TEST_CASE("fit_decay on synthetic power laws") {
    auto synthetic = [](int pw) {
        ConvergenceTable t;
        t.kind = "synthetic";
        for (long n : geometric_grid(4096)) {
            Real err = Real(1) / pow(Real(n), pw);
            t.rows.push_back({n, Real(1) + err, Real(1), err});
        }
        return t;
    };
    ConvergenceTable t1 = synthetic(1);
    auto s1 = fit_decay(t1);
    REQUIRE(abs(*s1 + Real(1)) <= Real(1) / Real(100));
    ConvergenceTable t2 = synthetic(2);
    auto s2 = fit_decay(t2);
    REQUIRE(abs(*s2 + Real(2)) <= Real(1) / Real(100));
    // all-zero errors: exact convergence, no exponent
    ConvergenceTable t3;
    for (long n : {16L, 32L, 64L, 128L}) t3.rows.push_back({n, Real(1), Real(1), Real(0)});
    REQUIRE_FALSE(fit_decay(t3).has_value());
    REQUIRE_FALSE(t3.decay_exponent.has_value());
}

TEST_CASE("richardson_limit recovers a geometric-mode limit") {
    // value_i = L + c rho^i
    ConvergenceTable t;
    Real L = Real(1) / Real(10), c(3);
    Real rho = Real(7) / Real(10), m(1);
    for (long n : {16L, 23L, 32L, 46L, 64L, 91L}) {
        m *= rho;
        t.rows.push_back({n, L + c * m, L, abs(c * m)});
    }
    Real est = richardson_limit(t, 4);
    REQUIRE(abs(est - L) <= Real::pow2(-200));
}

TEST_CASE("scan precision stability 256 vs 512 bits") {
    std::vector<long> ns = geometric_grid(200);
    auto run = [&](long bits) {
        PrecisionScope scope(bits);
        JacobiParams p{Real(0), Real(1)};
        SobolevParams mn{Real(1), Real(1), Real(-1)};
        return derivative_ratio_scan(p, mn, 2, ns);
    };
    auto lo = run(256);
    auto hi = run(512);
    Real bound{std::string("1e-30")};
    for (std::size_t i = 0; i < lo.rows.size(); ++i) {
        Real rel = abs(lo.rows[i].value - hi.rows[i].value) / abs(hi.rows[i].value);
        REQUIRE(rel <= bound);
    }
}
