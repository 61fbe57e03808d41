#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "gps/errors.hpp"
#include "gps/predictions.hpp"
#include "gps/primes.hpp"
#include "gps/specfun.hpp"

using namespace gps;
using namespace gps::predictions;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double k4Pi2 = 4.0 * kPi * kPi;

// the full bundles are expensive (line integrals); share them across cases
const ConstantsBundle& bundle_indicator() {
    static ConstantsBundle b = assemble_constants(windows::builtin_indicator_pair());
    return b;
}
const ConstantsBundle& bundle_smooth() {
    static ConstantsBundle b = assemble_constants(windows::builtin_smooth_pair());
    return b;
}
}

TEST_CASE("constants_direct: indicator closed forms") {
    auto c = constants_direct(windows::builtin_indicator_pair());
    CHECK(c.C_phi == doctest::Approx(k4Pi2).epsilon(1e-15));
    CHECK(c.C_phi_prime == doctest::Approx(-k4Pi2).epsilon(1e-15));
    CHECK(c.C_f == doctest::Approx(1.0 / k4Pi2).epsilon(1e-15));
    CHECK(c.c_f == doctest::Approx(1.0 / k4Pi2).epsilon(1e-15));
    CHECK(c.phi_half == 2.0);
    CHECK(c.delta_phi == doctest::Approx(-8.0 * kPi * kPi).epsilon(1e-15));
    // Theorem 1.1 RHS collapse: C_phi log X + C'_phi + pi^2 phi_half^2 = 4 pi^2 log X
    double X = 12345.0;
    double rhs = c.C_phi * std::log(X) + c.C_phi_prime + kPi * kPi * c.phi_half * c.phi_half;
    CHECK(rhs == doctest::Approx(k4Pi2 * std::log(X)).epsilon(1e-14));
}

TEST_CASE("contour check: both pairs to 1e-8") {
    for (const auto& pair :
         {windows::builtin_indicator_pair(), windows::builtin_smooth_pair()}) {
        auto r = c_phi_contour_check(pair);
        CHECK(std::abs(r.c_phi_contour - r.c_phi_direct) < 1e-8 * (1.0 + std::abs(r.c_phi_direct)));
        CHECK(std::abs(r.c_phi_prime_contour - r.c_phi_prime_direct) <
              1e-8 * (1.0 + std::abs(r.c_phi_prime_direct)));
    }
    // indicator closed values: 2 pi int dt/(1/4+t^2) = 4 pi^2
    auto r = c_phi_contour_check(windows::builtin_indicator_pair());
    CHECK(r.c_phi_contour == doctest::Approx(k4Pi2).epsilon(1e-9));
    CHECK(r.c_phi_prime_contour == doctest::Approx(-k4Pi2).epsilon(1e-9));
}

TEST_CASE("pole-cancelled zeta kernel at the origin") {
    // kernel(0) = 2 gamma_0, cross-checked just off the origin
    double g2 = 2.0 * specfun::stieltjes_gamma0();
    specfun::cdouble s(1.0, 2e-6);
    auto v = specfun::zeta_prime(s) / specfun::zeta(s);
    CHECK(2.0 * v.real() == doctest::Approx(g2).epsilon(1e-7));
    CHECK(g2 == doctest::Approx(1.1544313298030657).epsilon(1e-12));
}

TEST_CASE("L kernel at the origin") {
    // 2 L'/L(1), finite (no pole)
    auto L1 = specfun::dirichlet_L({1.0, 0.0});
    auto Lp1 = specfun::dirichlet_L_prime({1.0, 0.0});
    double expect = 2.0 * (Lp1 / L1).real();
    specfun::cdouble s(1.0, 2e-7);
    auto v = specfun::dirichlet_L_prime(s) / specfun::dirichlet_L(s);
    CHECK(2.0 * v.real() == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("c_phi_zeta: quadrature vs prime-sum oracle, indicator") {
    auto pair = windows::builtin_indicator_pair();
    double oracle = c_phi_zeta_series(pair);
    // closed form: -8 pi^2 (1 + zeta'/zeta(2))
    auto z = specfun::zeta({2.0, 0.0});
    auto zp = specfun::zeta_prime({2.0, 0.0});
    double closed = -8.0 * kPi * kPi * (1.0 + (zp / z).real());
    CHECK(oracle == doctest::Approx(closed).epsilon(1e-12));
    auto q = c_phi_zeta(pair);
    CHECK(std::abs(q.value - oracle) < 3e-6);
    CHECK(std::abs(q.value - oracle) < 10.0 * q.err_bound + 1e-6);
}

TEST_CASE("c_phi_zeta: quadrature vs finite-sum oracle, smooth") {
    auto pair = windows::builtin_smooth_pair();
    double oracle = c_phi_zeta_series(pair);
    CHECK(oracle == doctest::Approx(-10.726933562007204).epsilon(1e-10));
    auto q = c_phi_zeta(pair);
    CHECK(std::abs(q.value - oracle) < 1e-8);
}

TEST_CASE("c_phi_L: quadrature vs series oracle, both pairs") {
    {
        auto pair = windows::builtin_indicator_pair();
        double oracle = c_phi_L_series(pair);
        auto L = specfun::dirichlet_L({2.0, 0.0});
        auto Lp = specfun::dirichlet_L_prime({2.0, 0.0});
        CHECK(oracle == doctest::Approx(-8.0 * kPi * kPi * (Lp / L).real()).epsilon(1e-12));
        auto q = c_phi_L(pair);
        CHECK(std::abs(q.value - oracle) < 3e-6);
    }
    {
        auto pair = windows::builtin_smooth_pair();
        auto q = c_phi_L(pair);
        CHECK(std::abs(q.value - c_phi_L_series(pair)) < 1e-8);
    }
}

TEST_CASE("a_phi_prime: quadrature vs V_p expansion, both pairs") {
    {
        auto pair = windows::builtin_indicator_pair();
        double oracle = a_phi_prime_series(pair);
        CHECK(oracle == doctest::Approx(-2.3288704719183278).epsilon(1e-7));
        auto q = a_phi_prime(pair);
        CHECK(std::abs(q.value - oracle) < 3e-6);
        // beta = 0 integrand check: prime sum equals -2 sum log p/(p^2-1)
        auto s0 = specfun::a_prime_sum(0.0, 100000);
        double direct = 0.0;
        primes::sieve_primes_stream(100000, [&](const primes::RationalPrime& p) {
            if (p.residue == primes::Residue::three_mod4) {
                direct += -2.0 * std::log(double(p.p)) / (double(p.p) * double(p.p) - 1.0);
            }
        });
        CHECK(s0.value.real() == doctest::Approx(direct).epsilon(1e-12));
    }
    {
        // smooth pair: exact cancellation makes A' vanish
        auto pair = windows::builtin_smooth_pair();
        CHECK(std::abs(a_phi_prime_series(pair)) < 1e-12);
        auto q = a_phi_prime(pair);
        CHECK(std::abs(q.value) < 1e-8);
    }
}

TEST_CASE("assemble_constants: identities and reality") {
    for (const auto& c : {bundle_indicator(), bundle_smooth()}) {
        double ph2 = c.phi_half * c.phi_half;
        CHECK(c.delta_phi ==
              doctest::Approx(c.C_phi_prime - kPi * kPi * ph2).epsilon(1e-12));
        CHECK(c.K_phi == doctest::Approx(c.K_phi_from_kappa).epsilon(1e-12));
        // K_phi symbol-for-symbol from the conjecture's expression
        double direct = c.c_phi_zeta.value - c.c_phi_L.value - c.a_phi_prime.value +
                        2.0 * kPi * kPi * ph2 + c.C_phi * (std::log(kPi * kPi / 4.0) + 2.0);
        CHECK(c.K_phi == doctest::Approx(direct).epsilon(1e-14));
    }
}

TEST_CASE("predict_rmt") {
    auto pair = windows::builtin_indicator_pair();
    CHECK(predict_rmt(pair, std::exp(10.0), std::exp(6.0)) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(predict_rmt(pair, std::exp(10.0), std::exp(4.0)) == doctest::Approx(8.0).epsilon(1e-12));
    // kink continuity at lambda = 1/2
    double X = 1e6;
    double Kk = std::sqrt(X);
    CHECK(predict_rmt(pair, X, Kk) == doctest::Approx(std::log(X)).epsilon(1e-12));
}

TEST_CASE("predict_theorem") {
    auto pair = windows::builtin_indicator_pair();
    double X = 1e6;
    CHECK(predict_theorem(pair, X, 1.2) ==
          doctest::Approx(std::pow(X, -0.2) * std::log(X)).epsilon(1e-12));
    // frozen spreadsheet value
    CHECK(predict_theorem(pair, 1e6, 1.2) == doctest::Approx(0.8716997854291211).epsilon(1e-12));
    CHECK(predict_theorem(pair, X, 8.0) < 1e-30);
    CHECK_THROWS_AS(predict_theorem(pair, X, 0.9), domain_error);
}

TEST_CASE("predict_refined branches and the jump at lambda = 1") {
    auto pair = windows::builtin_indicator_pair();
    const auto& c = bundle_indicator();
    double X = 1e6, lx = std::log(X);
    // 1/2 < lambda < 1 branch
    double v = predict_refined(c, X, 0.75);
    CHECK(v == doctest::Approx(c.C_f * std::pow(X, 0.25) * (c.C_phi * lx + c.delta_phi))
                   .epsilon(1e-13));
    // lambda < 1/2 branch and its RMT leading term
    double v25 = predict_refined(c, X, 0.25);
    double main = c.C_f * std::pow(X, 0.75) * (2.0 * 0.25 * c.C_phi * lx);
    CHECK(v25 == doctest::Approx(main - c.C_f * std::pow(X, 0.75) * c.K_phi).epsilon(1e-13));
    double rmt_main = std::pow(X, 0.75) * predict_rmt(pair, X, std::pow(X, 0.25));
    CHECK(main == doctest::Approx(rmt_main).epsilon(1e-12));
    // jump across lambda = 1: refined(1-) - theorem(1) = -2 pi^2 phi_half^2 * C_f X^{1-lambda}
    double lam = 1.0;
    double left = c.C_f * std::pow(X, 1.0 - lam) * (c.C_phi * lx + c.delta_phi);
    double theorem_at_1 = c.C_f * std::pow(X, 1.0 - lam) *
                          (c.C_phi * lx + c.C_phi_prime + kPi * kPi * c.phi_half * c.phi_half);
    CHECK(left - theorem_at_1 ==
          doctest::Approx(-2.0 * kPi * kPi * c.phi_half * c.phi_half * c.C_f).epsilon(1e-12));
    // bifurcation guard
    CHECK_THROWS_AS(predict_refined(c, X, 0.51), domain_error);
    CHECK_THROWS_AS(predict_refined(c, X, 0.995), domain_error);
    CHECK_NOTHROW(predict_refined(c, X, 0.51, /*force=*/true));
}

TEST_CASE("ratio curves") {
    auto pair = windows::builtin_indicator_pair();
    const auto& c = bundle_indicator();
    uint64_t X = 1000000;
    std::vector<double> grid{0.9, 0.2, 0.7, 1.2};  // unsorted on purpose
    auto rmt = ratio_curve(c, pair, X, grid, Model::rmt, Normalization::asymptotic_mean);
    REQUIRE(rmt.points.size() == 4);
    // emitted ascending
    for (std::size_t i = 1; i < rmt.points.size(); ++i) {
        CHECK(rmt.points[i].lambda > rmt.points[i - 1].lambda);
    }
    for (const auto& p : rmt.points) {
        CHECK(p.ratio == doctest::Approx(std::min(1.0, 2.0 * p.lambda)).epsilon(1e-12));
    }
    auto refined = ratio_curve(c, pair, X, {0.7}, Model::refined, Normalization::asymptotic_mean);
    double lx = std::log(double(X));
    CHECK(refined.points[0].ratio ==
          doctest::Approx(1.0 + c.delta_phi / (k4Pi2 * lx)).epsilon(1e-12));
    // empirical normalization requires the means
    CHECK_THROWS_AS(ratio_curve(c, pair, X, grid, Model::rmt, Normalization::empirical_mean),
                    domain_error);
}

TEST_CASE("stability under T and P_max doubling") {
    auto pair = windows::builtin_indicator_pair();
    LineOptions base;
    LineOptions doubled;
    doubled.T = 1600.0;
    auto z1 = c_phi_zeta(pair, base), z2 = c_phi_zeta(pair, doubled);
    CHECK(std::abs(z1.value - z2.value) < 1e-6);
    auto l1 = c_phi_L(pair, base), l2 = c_phi_L(pair, doubled);
    CHECK(std::abs(l1.value - l2.value) < 1e-6);
    LineOptions p2 = base;
    p2.P_max = 200000;
    auto a1 = a_phi_prime(pair, base), a2 = a_phi_prime(pair, p2);
    CHECK(std::abs(a1.value - a2.value) < 1e-6);
}
