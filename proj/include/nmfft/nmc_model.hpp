#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "nmfft/stream2d.hpp"

namespace nmfft::nmc {

// Bandwidths in the Access Processor model are binary gigabytes per second.
inline constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;

enum class MemoryKind { ddr4_dimm, hbm2_channel };

std::string_view to_string(MemoryKind kind) noexcept;
// Accepts "DDR4_DIMM" / "HBM2_channel" (case-insensitive); throws ValidationError.
MemoryKind parse_memory_kind(std::string_view text);

struct NmcConfig {
  std::string name;
  std::string label;  // display name, e.g. "1 DDR4 DIMM"; falls back to name
  MemoryKind memory_kind = MemoryKind::ddr4_dimm;
  unsigned channels = 1;
  double bw_per_channel_gib = 15.0;  // effective, per channel
  std::size_t access_width_bytes = 32;
  unsigned accelerators = 1;
  // Per-accelerator 1D FFT throughput. Placeholder default; no measured
  // figure exists for the accelerator cores.
  double accel_flops = 10e9;

  double aggregate_bw_gib() const noexcept { return channels * bw_per_channel_gib; }
  double aggregate_bw_bytes() const noexcept { return aggregate_bw_gib() * kGiB; }
  const std::string& display_label() const noexcept { return label.empty() ? name : label; }

  // Throws ValidationError naming the offending field.
  void validate() const;
};

enum class Bottleneck { bandwidth, compute };
std::string_view to_string(Bottleneck b) noexcept;

struct EstimateReport {
  std::size_t n = 0;
  double total_bytes = 0.0;
  double total_flops = 0.0;
  double bandwidth_time_s = 0.0;
  double compute_time_s = 0.0;
  double time_s = 0.0;
  Bottleneck bottleneck = Bottleneck::bandwidth;
  unsigned min_accelerators_for_overlap = 1;
  // Pipeline simulation only: row blocks scheduled over both passes.
  std::uint64_t blocks_scheduled = 0;
};

// Memory traffic of a streamed 2D FFT: two passes, each one full read and one
// full write of the 8*n^2-byte grid.
double traffic_bytes(std::size_t n);
// Two passes of n row transforms at 5*n*log2(n) flops each.
double fft2d_flops(std::size_t n);

// Closed form: time = max(bytes / aggregate bandwidth, flops / compute rate).
EstimateReport estimate_fft2d_time(std::size_t n, const NmcConfig& cfg);

// Same model driven by an externally measured traffic volume, e.g. a
// StreamTrace total.
EstimateReport estimate_from_traffic(std::size_t n, double bytes, const NmcConfig& cfg);

// Smallest accelerator count whose compute time does not exceed the
// bandwidth time.
unsigned min_accelerators(std::size_t n, const NmcConfig& cfg);

// Discrete-event simulation of the read -> 1D FFT -> write pipeline over all
// k-row blocks of both passes. `cfg.accelerators` compute slots, each owning
// an input and an output staging buffer; the aggregate channel bandwidth is
// shared equally between in-flight transfers. The second pass starts once the
// first has been written back completely.
EstimateReport simulate_pipeline(std::size_t n, const NmcConfig& cfg, TileParams tile);

}  // namespace nmfft::nmc
