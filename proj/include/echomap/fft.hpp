// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace echomap {

using cplx = std::complex<double>;

std::size_t next_pow2(std::size_t n);

// Unnormalized forward DFT, X[k] = sum_n x[n] e^{-j 2 pi k n / N}.
std::vector<cplx> fft(std::span<const cplx> x);

// Inverse DFT including the 1/N factor.
std::vector<cplx> ifft(std::span<const cplx> X);

// Full N-bin spectrum of a real sequence zero-padded (or truncated) to n.
std::vector<cplx> real_spectrum(std::span<const double> x, std::size_t n);

// Real part of the inverse DFT.
std::vector<double> real_inverse(std::span<const cplx> X);

// Linear convolution computed with a zero-padded FFT, truncated to out_len samples.
std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b,
                                 std::size_t out_len);

}  // namespace echomap
