#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace gps::specfun {

using cdouble = std::complex<double>;

struct LineSample {
    cdouble s;
    cdouble value;
    double abs_error_bound;
};

// Riemann zeta and its derivative by Euler-Maclaurin, Re(s) > 0, s != 1.
// Accurate to ~1e-12 relative on the lines used by the prediction integrals.
LineSample zeta_sample(cdouble s);
LineSample zeta_prime_sample(cdouble s);
cdouble zeta(cdouble s);
cdouble zeta_prime(cdouble s);

// Hurwitz zeta and d/ds, same Euler-Maclaurin backbone.
LineSample hurwitz_zeta_sample(cdouble s, double a);
LineSample hurwitz_zeta_prime_sample(cdouble s, double a);

// L(s, chi_1 mod 4) = 4^{-s} (zeta(s,1/4) - zeta(s,3/4)), entire.
LineSample dirichlet_L_sample(cdouble s);
LineSample dirichlet_L_prime_sample(cdouble s);
cdouble dirichlet_L(cdouble s);
cdouble dirichlet_L_prime(cdouble s);

// Gamma(1/2 - a + 2k) / Gamma(1/2 + a + 2k) via log-gamma differences.
double gamma_ratio(double a, long k);

// Euler-Mascheroni constant via the harmonic-sum limit with Euler-Maclaurin
// correction (independent of the zeta machinery above).
double stieltjes_gamma0();

// One prime's term of the Lemma-"A integral" sum:
//   (p^{2+8b} + p^2 - 2 p^{4b}) log p / (p^{2+8b} + p^2 - p^{4b} - p^{4+4b})
cdouble a_prime_term(uint64_t p, cdouble beta);

// Truncated sum over p == 3 (mod 4), p <= P_max, with an explicit tail bound.
// Requires |Re beta| < 1/8.
struct APrimeSum {
    cdouble value;
    double tail_bound;
};
APrimeSum a_prime_sum(cdouble beta, uint64_t P_max);
APrimeSum a_prime_sum(cdouble beta, const std::vector<uint64_t>& primes_3mod4, uint64_t P_max);

// Ratios-recipe local factors. Shifts must satisfy |Re| < 1/8.
enum class PClass : uint8_t { one_mod4, three_mod4, two };
PClass classify_prime(uint64_t p);

// Closed-form G_p(alpha, beta, gamma, delta); series_cut is used only by the
// brute-force series evaluator below (kept on the signature so callers can
// pin the verification cut next to the value they check).
cdouble local_factor_G(uint64_t p, cdouble alpha, cdouble beta, cdouble gamma, cdouble delta,
                       int series_cut = 0);
cdouble local_factor_Y(uint64_t p, cdouble alpha, cdouble beta, cdouble gamma, cdouble delta);

// Exact Euler factor at p of the zeta/L ratio Y(alpha, beta, gamma, delta);
// the displayed polynomial above agrees with it to O(1/p^2). The local
// factors of A := G/Y use this exact form.
cdouble local_factor_Y_exact(uint64_t p, cdouble alpha, cdouble beta, cdouble gamma,
                             cdouble delta);

// Direct 4-fold (m, n, h, l) summation of G_p from the coefficient-average
// table; geometric tail beyond m + n > series_cut.
cdouble local_factor_G_series(uint64_t p, cdouble alpha, cdouble beta, cdouble gamma,
                              cdouble delta, int series_cut);

// delta_p(m, n, h, l): the closed coefficient-average table.
double delta_table(PClass cls, int m, int n, int h, int l);

}  // namespace gps::specfun
