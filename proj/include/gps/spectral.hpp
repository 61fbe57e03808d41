#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gps/primes.hpp"
#include "gps/windows.hpp"

namespace gps::spectral {

// Flat term list: angles in [0, pi/2), weights Lambda * Phi(N/X) > 0, in a
// fixed canonical order (ascending norm, then angle). All sums iterate this
// order, so results are independent of the worker count.
struct TermList {
    std::vector<double> angle;
    std::vector<double> weight;
    uint64_t X = 0;
    double weight_sum = 0.0;  // S_0
    std::size_t size() const { return angle.size(); }
};

TermList make_term_list(const std::vector<primes::WeightedTerm>& terms,
                        const windows::WindowPhi& phi, uint64_t X);
TermList make_term_list_raw(std::vector<double> angles, std::vector<double> weights,
                            uint64_t X);

enum class SumMethod { automatic, exact, binned_fft };

struct HeckeOptions {
    SumMethod method = SumMethod::automatic;
    int workers = 0;
    // automatic switches to the binned-FFT path above this many term-mode ops
    double fft_threshold_ops = 4e10;
};

struct HeckeSumVector {
    uint64_t X = 0;
    long k_max = 0;
    std::vector<std::complex<double>> values;  // S_k for k = 0..k_max
    uint64_t term_count = 0;
    SumMethod method_used = SumMethod::exact;
    double method_error_bound = 0.0;  // binned-FFT gridding bound, 0 for exact
};

// S_k = sum_a Lambda(a) Phi(N(a)/X) e^{4 i k theta_a}, k = 0..k_max.
HeckeSumVector hecke_sums(const TermList& terms, long k_max, const HeckeOptions& opt = {});

struct MeanValue {
    double exact;       // f^(0) S_0 / K, an identity
    double asymptotic;  // (X/K) int f int Phi
};
MeanValue mean_value(const HeckeSumVector& S, const windows::WindowPair& pair, double K);
MeanValue mean_value_terms(const TermList& terms, const windows::WindowPair& pair, double K);

enum class VarMethod { spectral, direct };

struct VarianceEstimate {
    double value = 0.0;
    VarMethod method = VarMethod::spectral;
    long k_max = 0;          // spectral only
    double tail_bound = 0.0; // spectral only; worst-case |S_k| <= S_0 bound
    bool tail_warning = false;
    uint64_t X = 0;
    double K = 0.0;
    double lambda = 0.0;     // log K / log X
};

// Truncation policy: indicator f -> max(1e5, 1000 K); smooth f -> 8K (at
// least (m+2)K + 8 so the envelope bound applies).
long default_k_max(const windows::WindowF& f, double K);

// Var = (2/K^2) sum_{k=1}^{k_max} f^(k/K)^2 |S_k|^2, tail bound from the
// transform envelope with |S_k| <= S_0.
VarianceEstimate variance_spectral(const HeckeSumVector& S, const windows::WindowF& f,
                                   double K, double requested_tolerance = 0.0);

enum class DirectMode { automatic, reference, fast };

// Exact window-overlap variance: (2/pi) sum_{a,b} w_a w_b Ovl(d(a,b)) - <psi>^2
// where Ovl(d) = (pi/2K) rho_f(d K/(pi/2)) and d is circular distance mod pi/2.
// `reference` enumerates near pairs; `fast` (indicator only) uses prefix sums.
VarianceEstimate variance_direct(const TermList& terms, const windows::WindowF& f, double K,
                                 int workers = 0, DirectMode mode = DirectMode::automatic);

// psi_{K,X}(theta) on a grid; diagnostics and plotting.
std::vector<double> psi_eval(const TermList& terms, const windows::WindowPair& pair, double K,
                             const std::vector<double>& theta_grid);

void export_hecke_csv(const std::string& path, const HeckeSumVector& S);
void export_psi_csv(const std::string& path, const std::vector<double>& grid,
                    const std::vector<double>& psi);

}  // namespace gps::spectral
