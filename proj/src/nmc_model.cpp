#include "nmfft/nmc_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

#include "nmfft/errors.hpp"

namespace nmfft::nmc {

std::string_view to_string(MemoryKind kind) noexcept {
  return kind == MemoryKind::ddr4_dimm ? "DDR4_DIMM" : "HBM2_channel";
}

MemoryKind parse_memory_kind(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "ddr4_dimm" || lower == "ddr4") return MemoryKind::ddr4_dimm;
  if (lower == "hbm2_channel" || lower == "hbm2") return MemoryKind::hbm2_channel;
  throw ValidationError("memory_kind", "unknown memory kind '" + std::string(text) + "'");
}

std::string_view to_string(Bottleneck b) noexcept {
  return b == Bottleneck::bandwidth ? "bandwidth" : "compute";
}

void NmcConfig::validate() const {
  const std::string where = name.empty() ? std::string("nmc_config") : name;
  if (channels < 1) throw ValidationError(where + ".channels", "must be >= 1");
  if (!(bw_per_channel_gib > 0.0) || !std::isfinite(bw_per_channel_gib)) {
    throw ValidationError(where + ".bw_per_channel_gibs", "must be positive");
  }
  if (accelerators < 1) throw ValidationError(where + ".accelerators", "must be >= 1");
  if (!(accel_flops > 0.0)) throw ValidationError(where + ".accel_gflops", "must be positive");
  if (access_width_bytes == 0) {
    throw ValidationError(where + ".access_width_bytes", "must be positive");
  }
}

double traffic_bytes(std::size_t n) {
  exact_log2(n);
  const double side = static_cast<double>(n);
  return 2.0 * 2.0 * side * side * static_cast<double>(kSampleBytes);
}

double fft2d_flops(std::size_t n) {
  return 2.0 * static_cast<double>(n) * flop_count_fft(n);
}

namespace {

double compute_time(std::size_t n, const NmcConfig& cfg, double accelerators) {
  if (std::isinf(cfg.accel_flops)) return 0.0;
  return fft2d_flops(n) / (accelerators * cfg.accel_flops);
}

}  // namespace

unsigned min_accelerators(std::size_t n, const NmcConfig& cfg) {
  cfg.validate();
  const double bandwidth_time = traffic_bytes(n) / cfg.aggregate_bw_bytes();
  if (std::isinf(cfg.accel_flops)) return 1;

  // ceil(10 log2(n) * bw / (32 * rate)); then nudge by one in either direction
  // to absorb rounding in the division.
  const double exact = 10.0 * exact_log2(n) * cfg.aggregate_bw_bytes() / (32.0 * cfg.accel_flops);
  if (exact > static_cast<double>(std::numeric_limits<unsigned>::max() - 1)) {
    throw DomainError("accelerator count overflows");
  }
  auto a = static_cast<unsigned>(std::max(1.0, std::ceil(exact)));
  while (compute_time(n, cfg, a) > bandwidth_time) ++a;
  while (a > 1 && compute_time(n, cfg, a - 1) <= bandwidth_time) --a;
  return a;
}

EstimateReport estimate_from_traffic(std::size_t n, double bytes, const NmcConfig& cfg) {
  cfg.validate();
  if (!(bytes >= 0.0)) throw DomainError("traffic volume must be non-negative");
  EstimateReport r;
  r.n = n;
  r.total_bytes = bytes;
  r.total_flops = fft2d_flops(n);
  r.bandwidth_time_s = bytes / cfg.aggregate_bw_bytes();
  r.compute_time_s = compute_time(n, cfg, cfg.accelerators);
  r.bottleneck = r.compute_time_s > r.bandwidth_time_s ? Bottleneck::compute : Bottleneck::bandwidth;
  r.time_s = std::max(r.bandwidth_time_s, r.compute_time_s);
  r.min_accelerators_for_overlap = min_accelerators(n, cfg);
  return r;
}

EstimateReport estimate_fft2d_time(std::size_t n, const NmcConfig& cfg) {
  return estimate_from_traffic(n, traffic_bytes(n), cfg);
}

EstimateReport simulate_pipeline(std::size_t n, const NmcConfig& cfg, TileParams tile) {
  EstimateReport report = estimate_fft2d_time(n, cfg);
  tile.check_divides(n);

  const std::size_t k = tile.rows();
  const std::size_t blocks_per_pass = n / k;
  const double block_bytes = static_cast<double>(k * n * kSampleBytes);
  const double block_compute =
      std::isinf(cfg.accel_flops) ? 0.0 : static_cast<double>(k) * flop_count_fft(n) / cfg.accel_flops;
  const double bandwidth = cfg.aggregate_bw_bytes();
  const std::size_t slots = cfg.accelerators;
  const double done_eps = block_bytes * 1e-9;

  // The channel runs one read stream and one write stream; further requests
  // queue in FIFO order. Active streams split the bandwidth evenly.
  struct Transfer {
    double remaining;
    bool is_write;
  };
  std::vector<Transfer> transfers;
  std::vector<double> computing;  // finish times
  std::size_t queued_writes = 0;
  std::size_t free_buffers = 2 * slots;
  double now = 0.0;

  auto active = [&](bool is_write) {
    return std::any_of(transfers.begin(), transfers.end(),
                       [&](const Transfer& t) { return t.is_write == is_write; });
  };

  for (int pass = 0; pass < 2; ++pass) {
    std::size_t unread = blocks_per_pass;
    std::size_t ready = 0;
    for (;;) {
      if (free_buffers > 0 && unread > 0 && !active(false)) {
        --free_buffers;
        --unread;
        transfers.push_back({block_bytes, false});
      }
      if (queued_writes > 0 && !active(true)) {
        --queued_writes;
        transfers.push_back({block_bytes, true});
      }
      while (computing.size() < slots && ready > 0) {
        --ready;
        computing.push_back(now + block_compute);
      }
      if (transfers.empty() && computing.empty()) break;

      double transfer_dt = std::numeric_limits<double>::infinity();
      double rate = 0.0;
      if (!transfers.empty()) {
        rate = bandwidth / static_cast<double>(transfers.size());
        const auto min_it = std::min_element(
            transfers.begin(), transfers.end(),
            [](const Transfer& a, const Transfer& b) { return a.remaining < b.remaining; });
        transfer_dt = std::max(0.0, min_it->remaining) / rate;
      }
      const double next_compute = computing.empty()
                                      ? std::numeric_limits<double>::infinity()
                                      : *std::min_element(computing.begin(), computing.end());

      double step;
      if (next_compute - now <= transfer_dt) {
        step = std::max(0.0, next_compute - now);
        now = std::max(now, next_compute);
      } else {
        step = transfer_dt;
        now += step;
      }
      for (auto& t : transfers) t.remaining -= rate * step;

      for (auto it = transfers.begin(); it != transfers.end();) {
        if (it->remaining <= done_eps) {
          if (it->is_write) {
            ++free_buffers;
          } else {
            ++ready;
          }
          it = transfers.erase(it);
        } else {
          ++it;
        }
      }
      for (auto it = computing.begin(); it != computing.end();) {
        if (*it <= now) {
          ++queued_writes;
          it = computing.erase(it);
        } else {
          ++it;
        }
      }
    }
    report.blocks_scheduled += blocks_per_pass;
  }

  report.time_s = now;
  report.bottleneck =
      report.compute_time_s > report.bandwidth_time_s ? Bottleneck::compute : Bottleneck::bandwidth;
  return report;
}

}  // namespace nmfft::nmc
