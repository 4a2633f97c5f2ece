#include "nmfft/projection.hpp"

#include <cmath>

#include "nmfft/errors.hpp"

namespace nmfft::perf {

double speedup(double baseline_s, double target_s) {
  if (!(baseline_s > 0.0) || !(target_s > 0.0) || !std::isfinite(baseline_s) ||
      !std::isfinite(target_s)) {
    throw DomainError("speedup requires positive finite times");
  }
  return baseline_s / target_s;
}

AmdahlResult amdahl_projection(const std::map<std::string, double>& kernel_times_s,
                               std::string_view accelerated, double new_time_s) {
  double total = 0.0;
  for (const auto& [kernel, t] : kernel_times_s) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw ValidationError(kernel, "kernel time must be positive");
    }
    total += t;
  }
  const auto it = kernel_times_s.find(std::string(accelerated));
  if (it == kernel_times_s.end()) {
    throw ValidationError(std::string(accelerated), "unknown kernel");
  }
  if (!(new_time_s >= 0.0) || !std::isfinite(new_time_s)) {
    throw DomainError("accelerated time must be non-negative");
  }
  AmdahlResult r;
  r.share_percent = 100.0 * it->second / total;
  r.overall_speedup = total / (total - it->second + new_time_s);
  return r;
}

}  // namespace nmfft::perf
