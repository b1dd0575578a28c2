#pragma once

#include <complex>
#include <span>
#include <vector>

namespace rhsolve::fft {

using cplx = std::complex<double>;

// Unnormalized DFTs backed by FFTW. forward: X_k = sum_j x_j e^{-2 pi i jk/N};
// backward: x_j = sum_k X_k e^{+2 pi i jk/N}. Plans are cached per size and
// shared between threads.
std::vector<cplx> forward(std::span<const cplx> x);
std::vector<cplx> backward(std::span<const cplx> x);

}  // namespace rhsolve::fft
