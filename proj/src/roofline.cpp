#include "nmfft/roofline.hpp"

#include <cmath>

#include "nmfft/errors.hpp"
#include "nmfft/fft.hpp"
#include "nmfft/nmc_model.hpp"

namespace nmfft::perf {

namespace {

void require_positive(double value, const std::string& where) {
  if (!(value > 0.0) || !std::isfinite(value)) throw ValidationError(where, "must be positive");
}

}  // namespace

double peak_flops_cpu(const MachineSpec& spec) {
  const std::string prefix = spec.name.empty() ? std::string("machine") : spec.name;
  if (!spec.freq_ghz) throw ValidationError(prefix + ".freq_ghz", "missing");
  if (!spec.ops_per_core) throw ValidationError(prefix + ".ops_per_core", "missing");
  if (!spec.cores) throw ValidationError(prefix + ".cores", "missing");
  if (!spec.sockets) throw ValidationError(prefix + ".sockets", "missing");
  return *spec.freq_ghz * *spec.ops_per_core * *spec.cores * *spec.sockets / 1000.0;
}

double MachineSpec::peak_tflops() const {
  return peak_tflops_override ? *peak_tflops_override : peak_flops_cpu(*this);
}

double MachineSpec::ridge_ai() const { return peak_tflops() / peak_bw_tbs(); }

void MachineSpec::validate() const {
  const std::string prefix = name.empty() ? std::string("machine") : name;
  require_positive(peak_bw_gbs, prefix + ".peak_bw_gbs");
  if (peak_tflops_override) {
    require_positive(*peak_tflops_override, prefix + ".peak_tflops");
  } else {
    // Reports the first missing field by name.
    peak_flops_cpu(*this);
    require_positive(*freq_ghz, prefix + ".freq_ghz");
    require_positive(*ops_per_core, prefix + ".ops_per_core");
    if (*cores == 0) throw ValidationError(prefix + ".cores", "must be positive");
    if (*sockets == 0) throw ValidationError(prefix + ".sockets", "must be positive");
  }
}

std::string_view to_string(Bound b) noexcept {
  return b == Bound::memory ? "memory" : "compute";
}

Bound parse_bound(std::string_view text) {
  if (text == "memory") return Bound::memory;
  if (text == "compute") return Bound::compute;
  throw ValidationError("bound", "expected 'memory' or 'compute', got '" + std::string(text) + "'");
}

double roofline_ceiling(double ai, const MachineSpec& spec) {
  return std::min(spec.peak_tflops(), ai * spec.peak_bw_tbs());
}

RooflinePoint roofline_classify(std::string kernel, double ai, double perf_tflops,
                                const MachineSpec& spec) {
  if (!(ai > 0.0) || !std::isfinite(ai)) {
    throw DomainError("arithmetic intensity must be positive (kernel '" + kernel + "')");
  }
  if (!(perf_tflops >= 0.0) || !std::isfinite(perf_tflops)) {
    throw DomainError("attained performance must be non-negative (kernel '" + kernel + "')");
  }
  spec.validate();
  RooflinePoint p;
  p.kernel = std::move(kernel);
  p.ai = ai;
  p.perf_tflops = perf_tflops;
  p.bound = ai < spec.ridge_ai() ? Bound::memory : Bound::compute;
  p.ceiling_tflops = roofline_ceiling(ai, spec);
  return p;
}

AiConvention parse_ai_convention(std::string_view text) {
  if (text == "canonical") return AiConvention::canonical;
  if (text == "gib_scaled") return AiConvention::gib_scaled;
  throw ValidationError("ai-convention", "expected 'canonical' or 'gib_scaled', got '" +
                                            std::string(text) + "'");
}

double fft2d_ai(std::size_t n, AiConvention convention) {
  const double side = static_cast<double>(n);
  const double canonical = nmc::fft2d_flops(n) / (side * side * static_cast<double>(kSampleBytes));
  return convention == AiConvention::canonical ? canonical : canonical * (nmc::kGiB / 1e9);
}

double attained_perf(std::size_t n, double time_s) {
  if (!(time_s > 0.0) || !std::isfinite(time_s)) throw DomainError("time must be positive");
  return nmc::fft2d_flops(n) / time_s / 1e12;
}

}  // namespace nmfft::perf
