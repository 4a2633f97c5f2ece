#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nmfft/cpi.hpp"
#include "nmfft/nmc_model.hpp"
#include "nmfft/roofline.hpp"

namespace nmfft::io {

// Counter dumps are CSV with the header `kernel,counter,value`, one counter
// per row. Blank lines and lines starting with '#' are ignored. Kernels are
// returned in first-appearance order and validated against the CPI tree.
std::vector<perf::PmuSample> parse_counter_dump(std::string_view text);
std::vector<perf::PmuSample> load_counter_dump(const std::filesystem::path& path);
std::string write_counter_dump(std::span<const perf::PmuSample> samples);

// Roofline point files: `kernel,ai,perf_tflops` with an optional trailing
// `bound` column, which is ignored on input (bounds are recomputed against a
// machine).
struct PointRecord {
  std::string kernel;
  double ai = 0.0;
  double perf_tflops = 0.0;
};
std::vector<PointRecord> parse_roofline_points(std::string_view text);

struct SpecFile {
  std::vector<perf::MachineSpec> machines;
  std::vector<nmc::NmcConfig> nmc_configs;

  const perf::MachineSpec& machine(std::string_view name) const;
  const nmc::NmcConfig& nmc_config(std::string_view name) const;
};

// JSON document with `machines` and `nmc_configs` arrays; see
// docs/formats.md. Errors are ValidationError with a JSON path such as
// "machines[1].freq_ghz", or ParseError for malformed JSON.
SpecFile parse_spec(std::string_view json_text);
SpecFile load_spec(const std::filesystem::path& path);

// The built-in platform set: Power9, V100, AlphaData 9V3 (DDR4) and 9H7
// (HBM2), plus the four memory configurations of the AP estimate table.
std::string_view default_spec_text() noexcept;
const SpecFile& default_spec();

std::string read_text_file(const std::filesystem::path& path);

}  // namespace nmfft::io
