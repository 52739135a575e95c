#include "nlsurr/fft.hpp"

#include <cmath>
#include <numbers>

#include "nlsurr/error.hpp"

namespace nlsurr {
namespace {

// In-place iterative radix-2 transform; `inverse` flips the twiddle sign (no scaling).
void fft_radix2(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      // Twiddles evaluated directly rather than by recurrence to keep round-off flat.
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(len);
      const Complex w(std::cos(angle), std::sin(angle));
      for (std::size_t i = 0; i < n; i += len) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

std::vector<Complex> transform(std::vector<Complex> a, bool inverse) {
  if (is_power_of_two(a.size())) {
    fft_radix2(a, inverse);
    return a;
  }
  return direct_dft(a, inverse);
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::vector<Complex> direct_dft(std::span<const Complex> x, bool inverse) {
  const std::size_t n = x.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      // Reduce k*t mod n first so the angle stays in [0, 2 pi).
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) /
                           static_cast<double>(n);
      acc += x[t] * Complex(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

Spectrum dft(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorKind::Length, "dft: empty input");
  std::vector<Complex> a(x.begin(), x.end());
  return transform(std::move(a), false);
}

std::vector<Complex> idft_complex(std::span<const Complex> spectrum) {
  if (spectrum.empty()) throw Error(ErrorKind::Length, "idft: empty input");
  auto a = transform(std::vector<Complex>(spectrum.begin(), spectrum.end()), true);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= scale;
  return a;
}

std::vector<double> idft(std::span<const Complex> spectrum) {
  const auto c = idft_complex(spectrum);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

std::vector<double> amplitudes(std::span<const Complex> spectrum) {
  std::vector<double> out(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) out[i] = std::abs(spectrum[i]);
  return out;
}

}  // namespace nlsurr
