#pragma once

#include <map>
#include <string>
#include <string_view>

namespace nmfft::perf {

// baseline / target; both must be positive.
double speedup(double baseline_s, double target_s);

struct AmdahlResult {
  double share_percent = 0.0;   // accelerated kernel's share of the total time
  double overall_speedup = 1.0;  // whole-application speedup after replacement
};

// Replaces `accelerated`'s time with `new_time_s` (>= 0) and reports its
// original share and the resulting end-to-end speedup.
AmdahlResult amdahl_projection(const std::map<std::string, double>& kernel_times_s,
                               std::string_view accelerated, double new_time_s);

}  // namespace nmfft::perf
