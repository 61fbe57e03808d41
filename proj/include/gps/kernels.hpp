#pragma once

#include <complex>
#include <cstddef>

namespace gps::kernels {

// Accumulates S[k - k0] += sum_i w[i] * exp(i k phase[i]) for k in [k0, k1).
// Power iteration in term blocks with periodic exact resync; summation order
// is fixed by (block, lane) so results do not depend on the caller's thread
// count. `out` must hold k1 - k0 entries.
using hecke_fn = void (*)(const double* phase, const double* weight, std::size_t n,
                          long k0, long k1, std::complex<double>* out);

void hecke_power_sums_scalar(const double* phase, const double* weight, std::size_t n,
                             long k0, long k1, std::complex<double>* out);
#if defined(__x86_64__)
void hecke_power_sums_avx2(const double* phase, const double* weight, std::size_t n,
                           long k0, long k1, std::complex<double>* out);
#endif

// Best kernel for this CPU, chosen once at startup.
hecke_fn hecke_power_sums();
const char* active_kernel_name();

}  // namespace gps::kernels
