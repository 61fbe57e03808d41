#include "gps/nufft.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "gps/errors.hpp"

namespace gps::nufft {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Gaussian spreading half-width in fine-grid cells; with oversampling 2 the
// gridding error is ~ e^{-pi Msp (1 - 1/(2 sigma - 1))} ~ 1e-13 at Msp = 14.
constexpr int kMsp = 14;
constexpr int kSigma = 2;

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}
}  // namespace

Result type1(const double* x, const double* w, std::size_t n, long k_max) {
    if (k_max < 1) throw domain_error("nufft: k_max must be >= 1");
    std::size_t Mr = next_pow2(std::max<std::size_t>(4096, 2 * kSigma * (std::size_t(k_max) + 1)));
    double h = kTwoPi / double(Mr);
    // balance kernel truncation e^{-(Msp h)^2/4tau} against aliasing
    // e^{-tau (Mr - 2 k_max) Mr}; with k_max <= Mr/4 both hit e^{-pi Msp/sqrt(2)}
    // at tau = sqrt(2) pi Msp / Mr^2
    double tau = std::numbers::sqrt2 * std::numbers::pi * double(kMsp) / (double(Mr) * double(Mr));
    std::vector<std::complex<double>> grid(Mr, 0.0);

    // spread: each point touches 2*Msp+1 cells of the periodic fine grid
    double inv4tau = 1.0 / (4.0 * tau);
    for (std::size_t j = 0; j < n; ++j) {
        double xj = x[j];
        long m0 = std::lround(xj / h);
        double wj = w[j];
        for (int dm = -kMsp; dm <= kMsp; ++dm) {
            long m = m0 + dm;
            double d = xj - h * double(m);
            double g = wj * std::exp(-d * d * inv4tau);
            std::size_t idx = std::size_t((m % long(Mr) + long(Mr)) % long(Mr));
            grid[idx] += g;
        }
    }

    // S^_k = sum_m grid[m] e^{+i k x_m}: a backward DFT of the fine grid
    std::vector<std::complex<double>> freq(Mr);
    fftw_plan plan = fftw_plan_dft_1d(int(Mr), reinterpret_cast<fftw_complex*>(grid.data()),
                                      reinterpret_cast<fftw_complex*>(freq.data()),
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    // deconvolve: S_k = S^_k * h * e^{tau k^2} / sqrt(4 pi tau)
    Result out;
    out.grid_size = Mr;
    out.modes.resize(std::size_t(k_max) + 1);
    double norm = h / std::sqrt(4.0 * std::numbers::pi * tau);
    for (long k = 0; k <= k_max; ++k) {
        out.modes[std::size_t(k)] = freq[std::size_t(k)] * (norm * std::exp(tau * double(k) * k));
    }
    // gridding (truncation + aliasing) plus deconvolution-amplified roundoff
    out.rel_error_bound = 6.0 * std::exp(-std::numbers::pi * kMsp / std::numbers::sqrt2) +
                          200.0 * std::exp(tau * double(k_max) * double(k_max)) * 1e-16;
    return out;
}

}  // namespace gps::nufft
