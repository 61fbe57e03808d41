#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "gps/errors.hpp"
#include "gps/quadrature.hpp"
#include "gps/windows.hpp"

using namespace gps;
using namespace gps::windows;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("indicator pair closed forms") {
    auto pair = builtin_indicator_pair();
    CHECK(pair.f.fourier(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pair.f.fourier(0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
    CHECK(std::abs(pair.phi.mellin({0.5, 0.0}) - std::complex<double>(2.0, 0.0)) < 1e-15);
    CHECK(pair.f.int_f() == 1.0);
    CHECK(pair.f.int_f2() == 1.0);
    CHECK(pair.phi.int_phi() == 1.0);
    CHECK(pair.phi.int_phi2() == 1.0);
    CHECK(pair.phi.int_logphi2() == -1.0);
    CHECK(pair.phi.phi_half() == 2.0);
    // |Phi~(1/2+it)|^2 = 1/(1/4+t^2)
    for (double t : {0.0, 0.3, 2.0, 17.5}) {
        CHECK(pair.phi.mellin_sq_line(t) == doctest::Approx(1.0 / (0.25 + t * t)).epsilon(1e-14));
    }
    // indicator includes the right endpoint: terms with N = X count
    CHECK(pair.phi.evaluate(1.0) == 1.0);
    CHECK(pair.phi.evaluate(1.0 + 1e-12) == 0.0);
    CHECK(pair.phi.evaluate(0.0) == 0.0);
}

TEST_CASE("smooth pair: transforms vs quadrature oracles") {
    auto pair = builtin_smooth_pair();
    // fourier(0) vs int f by quadrature
    auto fint = quad::adaptive_gk([&](double x) { return pair.f.evaluate(x); }, -0.5, 0.5, 1e-13);
    CHECK(pair.f.fourier(0.0) == doctest::Approx(fint.value).epsilon(1e-12));
    CHECK(pair.f.int_f() == doctest::Approx(fint.value).epsilon(1e-12));
    // mellin(1) vs plain integral of Phi
    double lo = std::exp(-pair.phi.log_width());
    auto pint = quad::adaptive_gk([&](double x) { return pair.phi.evaluate(x); }, lo, 1.0, 1e-13);
    CHECK(std::abs(pair.phi.mellin({1.0, 0.0}) - std::complex<double>(pint.value, 0.0)) < 1e-12);
    CHECK(pair.phi.int_phi() == doctest::Approx(pint.value).epsilon(1e-12));
    // moments
    auto p2 = quad::adaptive_gk([&](double x) { double v = pair.phi.evaluate(x); return v * v; },
                                lo, 1.0, 1e-13);
    CHECK(pair.phi.int_phi2() == doctest::Approx(p2.value).epsilon(1e-12));
    auto lp2 = quad::adaptive_gk(
        [&](double x) { double v = pair.phi.evaluate(x); return std::log(x) * v * v; }, lo, 1.0,
        1e-13);
    CHECK(pair.phi.int_logphi2() == doctest::Approx(lp2.value).epsilon(1e-12));
    auto f2 = quad::adaptive_gk([&](double x) { double v = pair.f.evaluate(x); return v * v; },
                                -0.5, 0.5, 1e-13);
    CHECK(pair.f.int_f2() == doctest::Approx(f2.value).epsilon(1e-12));
    // rapid Mellin decay high on the line
    CHECK(std::abs(pair.phi.mellin({0.5, 50.0})) < 1e-8);
}

TEST_CASE("smooth pair: fourier transform matches quadrature at sample points") {
    auto f = WindowF::cospow(5);
    for (double y : {0.0, 0.37, 1.0, 2.0, 3.25, 4.0, 6.5}) {
        auto q = quad::adaptive_gk(
            [&](double x) { return f.evaluate(x) * std::cos(2.0 * kPi * y * x); }, -0.5, 0.5,
            1e-13);
        CHECK(f.fourier(y) == doctest::Approx(q.value).epsilon(2e-11));
    }
    // even and real: f^(-y) = f^(y)
    for (double y : {0.3, 1.7, 5.2}) CHECK(f.fourier(-y) == doctest::Approx(f.fourier(y)));
    // envelope actually dominates past the last pole
    for (double y : {6.5, 8.0, 11.0, 31.0}) {
        CHECK(std::abs(f.fourier(y)) <= f.fourier_envelope(y) * (1.0 + 1e-12));
    }
}

TEST_CASE("autocorrelations match quadrature") {
    auto f = WindowF::cospow(5);
    for (double t : {0.0, 0.2, 0.5, 0.77, 0.99}) {
        auto q = quad::adaptive_gk([&](double u) { return f.evaluate(u) * f.evaluate(u - t); },
                                   t - 0.5, 0.5, 1e-13);
        CHECK(f.autocorr(t) == doctest::Approx(q.value).epsilon(1e-11));
    }
    CHECK(f.autocorr(0.0) == doctest::Approx(f.int_f2()).epsilon(1e-13));
    CHECK(f.autocorr(1.0) == 0.0);
    auto ind = WindowF::indicator();
    CHECK(ind.autocorr(0.25) == doctest::Approx(0.75));
    // rho_phi for the log-cosine window vs quadrature of phi(y) phi(y - tau)
    auto phi = WindowPhi::logcos(5, 3.0);
    auto phiy = [&](double y) { return phi.evaluate(std::exp(y)) * std::exp(0.5 * y); };
    for (double tau : {0.0, 0.5, 1.4, 2.9}) {
        auto q = quad::adaptive_gk([&](double y) { return phiy(y) * phiy(y - tau); }, -3.0 + tau,
                                   0.0, 1e-13);
        CHECK(phi.rho_phi(tau) == doctest::Approx(q.value).epsilon(1e-10));
    }
    // indicator rho_phi = e^{-tau/2}
    auto iphi = WindowPhi::indicator();
    CHECK(iphi.rho_phi(2.0 * std::log(3.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("F_K evaluation") {
    auto f = WindowF::indicator();
    CHECK(F_K_eval(f, 10.0, 0.0) == 1.0);
    CHECK(F_K_eval(f, 10.0, kPi / 4.0) == 0.0);
    for (double th : {0.01, 0.3, 1.2}) {
        CHECK(F_K_eval(f, 10.0, th) == doctest::Approx(F_K_eval(f, 10.0, th + kPi / 2)));
    }
    // integral over a period equals (pi/2) f^(0) / K
    auto g = [&](double th) { return F_K_eval(f, 8.0, th); };
    auto q1 = quad::adaptive_gk(g, 0.0, kPi / 32.0, 1e-12);
    auto q2 = quad::adaptive_gk(g, kPi / 2 - kPi / 32.0, kPi / 2, 1e-12);
    CHECK(q1.value + q2.value == doctest::Approx(kPi / 2.0 / 8.0).epsilon(1e-10));
}

TEST_CASE("parseval identity both pairs") {
    for (auto f : {WindowF::indicator(), WindowF::cospow(5)}) {
        auto [lhs, rhs] = parseval_check(f, 64.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        if (f.is_indicator()) {
            CHECK(lhs == doctest::Approx(1.0 / 64.0).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(parseval_check(WindowF::scaled_indicator(1.5), 2.0), domain_error);
}

TEST_CASE("registry") {
    CHECK(pair_by_name("indicator").f.is_indicator());
    CHECK(!pair_by_name("smooth").f.is_indicator());
    CHECK_THROWS_AS(pair_by_name("boxcar"), domain_error);
}
