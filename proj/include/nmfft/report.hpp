#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nmfft/cpi.hpp"
#include "nmfft/nmc_model.hpp"
#include "nmfft/roofline.hpp"

namespace nmfft::io {

enum class ReportFormat { csv, svg, table };
// "csv", "svg", "table" (also "text-table"); throws ValidationError otherwise.
ReportFormat parse_report_format(std::string_view text);

// Seconds to two significant digits, trailing zeros kept ("0.10", "2.1").
std::string format_seconds(double seconds);
// Seconds rounded to the two significant digits format_seconds prints.
double round_to_printed(double seconds);
// TFLOP/s and flop/byte values: four decimals.
std::string format_fixed4(double value);
// 4096 -> "4k"; sizes that are not a multiple of 1024 print as integers.
std::string size_label(std::size_t n);
// "4k" -> 4096, "64" -> 64; binary k (x1024). Throws ValidationError.
std::size_t parse_size(std::string_view text);

struct EstimateTable {
  std::vector<std::size_t> sizes;
  std::vector<nmc::NmcConfig> configs;
  std::vector<std::vector<nmc::EstimateReport>> cells;  // [size][config]
};
EstimateTable build_estimate_table(std::vector<std::size_t> sizes,
                                   std::vector<nmc::NmcConfig> configs);

struct RooflineReport {
  perf::MachineSpec machine;
  std::vector<perf::RooflinePoint> points;
};

// Modeled 2D FFT points for `machine`, one per size, using closed-form times
// under `cfg`. With `printed_times` the times are first rounded the way the
// estimate table prints them.
std::vector<perf::RooflinePoint> model_fft_points(const perf::MachineSpec& machine,
                                                  const nmc::NmcConfig& cfg,
                                                  const std::vector<std::size_t>& sizes,
                                                  perf::AiConvention convention,
                                                  bool printed_times);

struct CpiReport {
  std::vector<perf::CpiBreakdown> rows;
  std::vector<perf::Boundness> classes;  // parallel to rows
};
CpiReport build_cpi_report(const std::vector<perf::PmuSample>& samples,
                           const perf::BoundnessThresholds& thresholds = {});

// Deterministic renderings. Unsupported combinations (e.g. an SVG estimate
// table) throw ValidationError.
std::string emit_report(const EstimateTable& table, ReportFormat format);
std::string emit_report(const RooflineReport& report, ReportFormat format);
std::string emit_report(const CpiReport& report, ReportFormat format);

}  // namespace nmfft::io
