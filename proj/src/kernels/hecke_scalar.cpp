#include <cmath>
#include <vector>

#include "gps/kernels.hpp"

namespace gps::kernels {

namespace {
constexpr std::size_t kBlock = 2048;  // terms per cache-resident block
constexpr long kResync = 256;         // exact sincos refresh interval
}  // namespace

void hecke_power_sums_scalar(const double* phase, const double* weight, std::size_t n,
                             long k0, long k1, std::complex<double>* out) {
    if (k1 <= k0 || n == 0) return;
    std::vector<double> zr(kBlock), zi(kBlock), cr(kBlock), ci(kBlock);
    for (std::size_t b0 = 0; b0 < n; b0 += kBlock) {
        std::size_t bn = std::min(kBlock, n - b0);
        const double* ph = phase + b0;
        const double* w = weight + b0;
        for (std::size_t i = 0; i < bn; ++i) {
            zr[i] = std::cos(ph[i]);
            zi[i] = std::sin(ph[i]);
        }
        for (long k = k0; k < k1; ++k) {
            if ((k - k0) % kResync == 0) {
                for (std::size_t i = 0; i < bn; ++i) {
                    double a = double(k) * ph[i];
                    cr[i] = std::cos(a);
                    ci[i] = std::sin(a);
                }
            }
            double sre = 0.0, sim = 0.0;
            for (std::size_t i = 0; i < bn; ++i) {
                sre += w[i] * cr[i];
                sim += w[i] * ci[i];
                double t = cr[i] * zr[i] - ci[i] * zi[i];
                ci[i] = cr[i] * zi[i] + ci[i] * zr[i];
                cr[i] = t;
            }
            out[k - k0] += std::complex<double>(sre, sim);
        }
    }
}

}  // namespace gps::kernels
