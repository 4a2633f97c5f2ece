#include "nmfft/fft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nmfft/errors.hpp"

namespace nmfft {

unsigned exact_log2(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw LengthError("length " + std::to_string(n) + " is not a power of two");
  }
  unsigned bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

void require_finite(std::span<const Complex> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag())) {
      throw DomainError(std::string(what) + ": non-finite sample at index " +
                        std::to_string(i));
    }
  }
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
  const unsigned bits = exact_log2(n);
  if (n > (std::size_t{1} << 31)) throw LengthError("transform length too large");

  twiddles_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(n);
    twiddles_[j] = {std::cos(angle), std::sin(angle)};
  }

  bit_reverse_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0;
    for (unsigned b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::uint32_t{1} << (bits - 1 - b);
    }
    bit_reverse_[i] = r;
  }
}

void FftPlan::execute(std::span<Complex> data, Direction dir) const {
  if (data.size() != n_) {
    throw LengthError("plan for length " + std::to_string(n_) +
                      " applied to " + std::to_string(data.size()) + " samples");
  }
  require_finite(data, "fft input");

  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bit_reverse_[i];
    if (i < r) std::swap(data[i], data[r]);
  }

  const bool inverse = dir == Direction::inverse;
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t base = 0; base < n_; base += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> w = twiddles_[j * step];
        if (inverse) w = std::conj(w);
        const std::complex<double> u(data[base + j]);
        const std::complex<double> v =
            std::complex<double>(data[base + j + half]) * w;
        data[base + j] = Complex(u + v);
        data[base + j + half] = Complex(u - v);
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& x : data) x = Complex(std::complex<double>(x) * scale);
  }
  require_finite(data, "fft output");
}

ComplexVec fft1d(std::span<const Complex> x, Direction dir) {
  ComplexVec out(x.begin(), x.end());
  FftPlan(out.size()).execute(out, dir);
  return out;
}

ComplexVec dft_oracle(std::span<const Complex> x, Direction dir) {
  const std::size_t n = x.size();
  if (n == 0) throw LengthError("dft of an empty vector");
  require_finite(x, "dft input");

  // Roots of unity evaluated directly per index; exp(sign*2*pi*i*m/n).
  const double sign = dir == Direction::forward ? -1.0 : 1.0;
  std::vector<std::complex<double>> roots(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double angle =
        sign * 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    roots[m] = {std::cos(angle), std::sin(angle)};
  }

  ComplexVec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // k*j reduced mod n keeps every phase exact.
      acc += std::complex<double>(x[j]) * roots[(k * j) % n];
    }
    if (dir == Direction::inverse) acc /= static_cast<double>(n);
    out[k] = Complex(acc);
  }
  require_finite(out, "dft output");
  return out;
}

double flop_count_fft(std::size_t n) {
  return 5.0 * static_cast<double>(n) * exact_log2(n);
}

double relative_l2_error(std::span<const Complex> actual,
                         std::span<const Complex> expected) {
  if (actual.size() != expected.size()) {
    throw LengthError("relative_l2_error: size mismatch");
  }
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    diff += std::norm(std::complex<double>(actual[i]) -
                      std::complex<double>(expected[i]));
    ref += std::norm(std::complex<double>(expected[i]));
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

}  // namespace nmfft
