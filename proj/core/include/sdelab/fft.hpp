#pragma once

#include <complex>
#include <vector>

namespace sdelab {

using cvector = std::vector<std::complex<double>>;

/// Unnormalized forward DFT, length must be a power of two (FFTW backed,
/// plans cached per size, safe to call from several threads).
void fft_forward(cvector& data);

/// Inverse DFT including the 1/N factor.
void fft_inverse(cvector& data);

cvector fft_of_real(const std::vector<double>& field);
std::vector<double> real_ifft(cvector spectrum);

/// Frequency of DFT bin k on an N-point grid with period L (negative for k > N/2).
double fft_frequency(std::size_t k, std::size_t n, double period);

bool is_power_of_two(std::size_t n);

}  // namespace sdelab
