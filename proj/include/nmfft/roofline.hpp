#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmfft::perf {

// Platform description for roofline ceilings. CPUs give the clock/width/core
// fields and derive their peak; accelerators give peak_tflops_override.
struct MachineSpec {
  std::string name;
  std::string label;
  std::optional<double> freq_ghz;
  std::optional<double> ops_per_core;  // single-precision ops per cycle
  std::optional<unsigned> cores;
  std::optional<unsigned> sockets;
  double peak_bw_gbs = 0.0;  // decimal GB/s
  std::optional<double> peak_tflops_override;
  // Name of the NMC memory configuration whose modeled FFT points belong on
  // this machine's roofline, if any.
  std::optional<std::string> nmc_config;

  double peak_tflops() const;
  double peak_bw_tbs() const noexcept { return peak_bw_gbs / 1000.0; }
  // Arithmetic intensity where the bandwidth slope meets the compute roof.
  double ridge_ai() const;
  const std::string& display_label() const noexcept { return label.empty() ? name : label; }
  // Throws ValidationError naming the offending field.
  void validate() const;
};

// freq [GHz] * ops per core * cores * sockets / 1000, in TFLOP/s.
double peak_flops_cpu(const MachineSpec& spec);

enum class Bound { memory, compute };
std::string_view to_string(Bound b) noexcept;
Bound parse_bound(std::string_view text);

struct RooflinePoint {
  std::string kernel;
  double ai = 0.0;           // flop/byte
  double perf_tflops = 0.0;  // attained
  Bound bound = Bound::memory;
  double ceiling_tflops = 0.0;  // min(peak, ai * bandwidth)
};

double roofline_ceiling(double ai, const MachineSpec& spec);

// memory-bound below the ridge, compute-bound at or above it.
RooflinePoint roofline_classify(std::string kernel, double ai, double perf_tflops,
                                const MachineSpec& spec);

// How 2D FFT arithmetic intensity is reported. `canonical` divides
// 10*n^2*log2(n) flops by the 8*n^2 grid bytes. `gib_scaled` scales that by
// 2^30/10^9, i.e. GFLOP per GiB.
enum class AiConvention { canonical, gib_scaled };
AiConvention parse_ai_convention(std::string_view text);

double fft2d_ai(std::size_t n, AiConvention convention);
// 10*n^2*log2(n) / time, in TFLOP/s.
double attained_perf(std::size_t n, double time_s);

}  // namespace nmfft::perf
