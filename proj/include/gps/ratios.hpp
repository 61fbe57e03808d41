#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gps/specfun.hpp"

namespace gps::ratios {

using specfun::PClass;

// Hecke coefficient A_k(p^l): explicit trigonometric case table. theta_p is
// the prime angle for the split class (ignored otherwise). Values are real.
double A_k(PClass cls, double theta_p, long k, int l);

// Inverse coefficients mu_k(p^h), nonzero only for h <= 2.
double mu_k(PClass cls, double theta_p, long k, int h);

// Oracle: A_k(p^l) as the literal ideal sum over all ideals of norm p^l.
double A_k_ideal_sum(uint64_t p, double theta_p, long k, int l);

// Brute-force delta_p(m,n,h,l): average of mu_k(p^h) mu_k(p^l) A_k(p^n) A_k(p^m)
// over 0 < |k| <= K_avg (values are even in k, so k = 1..K_avg suffices).
double delta_bruteforce(PClass cls, double theta_p, int m, int n, int h, int l, long K_avg);

struct GammaAverage {
    double empirical;
    double predicted;  // (2K)^{-2 alpha} / (1 - 2 alpha)
};
GammaAverage gamma_average_check(double alpha, long K);

// max_p |G_p(a, b, a, b) - 1| over the given primes.
double lemma_A_is_1_check(std::complex<double> alpha, std::complex<double> beta,
                          const std::vector<uint64_t>& prime_set);

struct DerivativeCheck {
    std::complex<double> finite_difference;  // d/d alpha prod_p G_p/Y_p (-a,-b,a,b) at a=-b
    std::complex<double> formula;            // -2 a_prime_sum(beta, P_max)
    bool conditioning_warning;
};
DerivativeCheck lemma_A_derivative_check(std::complex<double> beta, double step,
                                         uint64_t P_max);

// One verification-suite entry.
struct CheckResult {
    std::string name;
    std::string params;
    double deviation;
    double tolerance;
    bool pass;
};

struct VerifyOptions {
    long delta_K_avg = 100000;
    double delta_tol = 5e-2;
    long gamma_K = 10000;
    double gamma_alpha = 0.1;
    uint64_t lemma_primes_upto = 50;
    double lemma_A_tol = 1e-10;
    double derivative_step = 1e-4;
    uint64_t derivative_P_max = 100000;
    double derivative_tol = 1e-4;
};

std::vector<CheckResult> run_verification(const VerifyOptions& opt = {});
void export_verification_json(const std::string& path, const std::vector<CheckResult>& results);

}  // namespace gps::ratios
