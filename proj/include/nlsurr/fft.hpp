#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nlsurr {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

bool is_power_of_two(std::size_t n) noexcept;

/// Unnormalized forward DFT, X_k = sum_t x_t exp(-2 pi i k t / n). Radix-2 for
/// power-of-two lengths, direct O(n^2) sum otherwise. Throws Error(Length) on empty input.
Spectrum dft(std::span<const double> x);

/// Inverse of dft (divides by n). Returns the complex result.
std::vector<Complex> idft_complex(std::span<const Complex> spectrum);

/// Real part of idft_complex.
std::vector<double> idft(std::span<const Complex> spectrum);

/// |X_k| for every bin.
std::vector<double> amplitudes(std::span<const Complex> spectrum);

/// Reference O(n^2) transform, used for non power-of-two lengths.
std::vector<Complex> direct_dft(std::span<const Complex> x, bool inverse);

}  // namespace nlsurr
