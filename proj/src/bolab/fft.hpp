#pragma once

#include <complex>
#include <cstddef>

namespace bolab::fft {

using cplx = std::complex<double>;

// Unnormalized DFTs: forward uses e^{-2 pi i jk/n}, backward e^{+2 pi i jk/n}.
// `in` and `out` may alias. Safe to call from several threads.
void forward(const cplx* in, cplx* out, std::size_t n);
void backward(const cplx* in, cplx* out, std::size_t n);

}  // namespace bolab::fft
