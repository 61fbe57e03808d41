#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gps::nufft {

// Type-1 nonuniform FFT: S_k = sum_j w_j e^{i k x_j} for k = 0..k_max, with
// x_j in [0, 2pi). Gaussian gridding onto an oversampled angle grid (bin width
// 2pi/grid_size <= pi/(2 k_max)), FFT, then deconvolution by the kernel
// transform. `rel_error_bound` is the gridding error relative to sum |w_j|.
struct Result {
    std::vector<std::complex<double>> modes;  // k = 0..k_max
    double rel_error_bound;
    std::size_t grid_size;
};

Result type1(const double* x, const double* w, std::size_t n, long k_max);

}  // namespace gps::nufft
