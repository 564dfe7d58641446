#pragma once

#include <span>
#include <vector>

#include "qclab/common.hpp"

// Thin FFTW wrappers. Transforms are unnormalized:
//   forward:  X_k = sum_j x_j exp(-2 pi i j k / n)
//   backward: x_j = sum_k X_k exp(+2 pi i j k / n)
namespace qclab::fft {

std::vector<cplx> forward(std::span<const cplx> data);
std::vector<cplx> backward(std::span<const cplx> data);

// Row-major n x n transforms, in place.
void forward_2d(std::vector<cplx>& data, std::size_t n);
void backward_2d(std::vector<cplx>& data, std::size_t n);

/// Signed frequency of FFT bin k for length n (k <= n/2 maps to k).
inline int signed_index(std::size_t k, std::size_t n) {
  return k <= n / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
}

}  // namespace qclab::fft
