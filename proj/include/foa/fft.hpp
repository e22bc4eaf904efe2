/*
Copyright 2026 The Foakit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef FOA_FFT_HPP_
#define FOA_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace foa::fft {

// In-place iterative radix-2 transforms on power-of-two sizes. Twiddle
// tables are cached per size and shared across threads. The inverse
// includes the 1/N scaling.
void Forward(std::span<std::complex<double>> a);
void Inverse(std::span<std::complex<double>> a);

size_t NextPow2(size_t n);

// Forward real FFT: zero-pads x to nfft and returns the nfft/2 + 1
// non-redundant bins.
std::vector<std::complex<double>> RealForward(std::span<const double> x,
                                              size_t nfft);

// Inverse real FFT from nfft/2 + 1 bins. The DC and Nyquist bins are forced
// real; the remaining spectrum is mirrored with Hermitian symmetry before a
// full complex inverse transform. If imag_residue_rel is non-null it
// receives the RMS of the (ideally zero) imaginary part relative to the RMS
// of the real output.
std::vector<double> RealInverse(std::span<const std::complex<double>> bins,
                                size_t nfft,
                                double* imag_residue_rel = nullptr);

// Linear convolution of x and h via zero-padded FFTs, truncated or
// zero-padded to out_len samples.
std::vector<double> ConvolveTruncate(std::span<const double> x,
                                     std::span<const double> h,
                                     size_t out_len);

}  // namespace foa::fft

#endif  // FOA_FFT_HPP_
