#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nmfft {

using Complex = std::complex<float>;
using ComplexVec = std::vector<Complex>;

enum class Direction { forward, inverse };

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

// log2 of a power of two; throws LengthError otherwise.
unsigned exact_log2(std::size_t n);

// Throws DomainError if any component is NaN or infinite.
void require_finite(std::span<const Complex> x, const char* what);

// Radix-2 decimation-in-time plan for one transform length. Twiddles are held
// in double precision and the butterflies are evaluated in double, rounding
// back to float after every stage.
//
// Forward is unnormalized, inverse is scaled by 1/n (FFTW convention).
//
// A plan is immutable after construction and may be shared between threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  // In-place transform of exactly size() samples.
  void execute(std::span<Complex> data, Direction dir) const;

 private:
  std::size_t n_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2*pi*i*j/n), j < n/2
  std::vector<std::uint32_t> bit_reverse_;
};

ComplexVec fft1d(std::span<const Complex> x, Direction dir);

// Direct O(n^2) evaluation of the same transform definition as fft1d, with
// double accumulation. Any length >= 1.
ComplexVec dft_oracle(std::span<const Complex> x, Direction dir);

// 5 * n * log2(n), the conventional flop count of a complex radix-2 FFT.
double flop_count_fft(std::size_t n);

// ||actual - expected||_2 / ||expected||_2, accumulated in double. Returns the
// absolute norm when `expected` is all zeros.
double relative_l2_error(std::span<const Complex> actual,
                         std::span<const Complex> expected);

}  // namespace nmfft
