#pragma once

#include <cstdint>
#include <random>

#include "nmfft/fft.hpp"

namespace nmfft::testing {

inline ComplexVec random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  ComplexVec v(n);
  for (auto& x : v) {
    const float re = dist(rng);
    const float im = dist(rng);
    x = {re, im};
  }
  return v;
}

inline double energy(const ComplexVec& v) {
  double e = 0.0;
  for (const auto& x : v) e += std::norm(std::complex<double>(x));
  return e;
}

}  // namespace nmfft::testing
