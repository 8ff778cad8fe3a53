#pragma once

#include <complex>
#include <span>

namespace nclab::detail {

/// In-place unnormalised DFT over a cube of Q^n points (last axis fastest).
/// sign = -1: Σ g_j e^{−2πi p·j/Q};  sign = +1: Σ g_j e^{+2πi p·j/Q}.
/// Plans are cached per thread.
void fft_cube(std::span<std::complex<double>> data, int n, int Q, int sign);

}  // namespace nclab::detail
