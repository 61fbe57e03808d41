// AVX2/FMA variant of the Hecke power-sum kernel. Compiled with -mavx2 -mfma
// in its own translation unit; selected at runtime via cpu feature detection.
#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>
#include <vector>

#include "gps/kernels.hpp"

namespace gps::kernels {

namespace {
constexpr std::size_t kBlock = 2048;
constexpr long kResync = 256;

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(s, s);
    return _mm_cvtsd_f64(_mm_add_sd(s, sh));
}
}  // namespace

void hecke_power_sums_avx2(const double* phase, const double* weight, std::size_t n,
                           long k0, long k1, std::complex<double>* out) {
    if (k1 <= k0 || n == 0) return;
    alignas(32) static thread_local double zr[kBlock], zi[kBlock], cr[kBlock], ci[kBlock],
        wl[kBlock];
    for (std::size_t b0 = 0; b0 < n; b0 += kBlock) {
        std::size_t bn = std::min(kBlock, n - b0);
        const double* ph = phase + b0;
        std::size_t bv = bn - bn % 4;  // vector part; remainder handled scalar
        for (std::size_t i = 0; i < bn; ++i) {
            zr[i] = std::cos(ph[i]);
            zi[i] = std::sin(ph[i]);
            wl[i] = weight[b0 + i];
        }
        for (long k = k0; k < k1; ++k) {
            if ((k - k0) % kResync == 0) {
                for (std::size_t i = 0; i < bn; ++i) {
                    double a = double(k) * ph[i];
                    cr[i] = std::cos(a);
                    ci[i] = std::sin(a);
                }
            }
            __m256d sre = _mm256_setzero_pd(), sim = _mm256_setzero_pd();
            for (std::size_t i = 0; i < bv; i += 4) {
                __m256d w = _mm256_load_pd(wl + i);
                __m256d c_r = _mm256_load_pd(cr + i);
                __m256d c_i = _mm256_load_pd(ci + i);
                sre = _mm256_fmadd_pd(w, c_r, sre);
                sim = _mm256_fmadd_pd(w, c_i, sim);
                __m256d z_r = _mm256_load_pd(zr + i);
                __m256d z_i = _mm256_load_pd(zi + i);
                __m256d t = _mm256_fmsub_pd(c_r, z_r, _mm256_mul_pd(c_i, z_i));
                __m256d u = _mm256_fmadd_pd(c_r, z_i, _mm256_mul_pd(c_i, z_r));
                _mm256_store_pd(cr + i, t);
                _mm256_store_pd(ci + i, u);
            }
            double re = hsum(sre), im = hsum(sim);
            for (std::size_t i = bv; i < bn; ++i) {
                re += wl[i] * cr[i];
                im += wl[i] * ci[i];
                double t = cr[i] * zr[i] - ci[i] * zi[i];
                ci[i] = cr[i] * zi[i] + ci[i] * zr[i];
                cr[i] = t;
            }
            out[k - k0] += std::complex<double>(re, im);
        }
    }
}

}  // namespace gps::kernels

#endif  // __x86_64__
