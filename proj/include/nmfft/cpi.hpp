#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmfft::perf {

// The Power9 PMU events used for the CPI breakdown.
enum class Counter {
  run_cyc,
  cmplu_stall,
  cmplu_stall_thrd,
  one_plus_ppc_cmpl,
  ntc_issue_hold,
  ict_noslot_cyc,
  cmplu_stall_lsu,
  cmplu_stall_exec_unit,
};

inline constexpr std::array<Counter, 8> kAllCounters = {
    Counter::run_cyc,          Counter::cmplu_stall,     Counter::cmplu_stall_thrd,
    Counter::one_plus_ppc_cmpl, Counter::ntc_issue_hold, Counter::ict_noslot_cyc,
    Counter::cmplu_stall_lsu,  Counter::cmplu_stall_exec_unit,
};

std::string_view counter_name(Counter c) noexcept;  // e.g. "PM_CMPLU_STALL_LSU"
std::optional<Counter> parse_counter(std::string_view name) noexcept;

// Breakdown tree:
//   PM_RUN_CYC
//   +- PM_CMPLU_STALL
//   |  +- PM_CMPLU_STALL_THRD
//   |  +- PM_CMPLU_STALL_LSU
//   |  +- PM_CMPLU_STALL_EXEC_UNIT
//   +- PM_1PLUS_PPC_CMPL
//   +- PM_NTC_ISSUE_HOLD
//   +- PM_ICT_NOSLOT_CYC
std::optional<Counter> parent(Counter c) noexcept;
int tree_level(Counter c) noexcept;  // root = 0

struct PmuSample {
  std::string kernel;
  std::map<Counter, std::uint64_t> counters;

  std::uint64_t value(Counter c) const noexcept;
  // PM_RUN_CYC present and > 0, and every present counter <= its parent.
  // Throws ValidationError whose where() names the violated edge.
  void validate() const;
};

struct CpiEntry {
  Counter counter;
  int level;
  double percent;  // of PM_RUN_CYC
};

struct CpiBreakdown {
  std::string kernel;
  std::vector<CpiEntry> entries;  // tree pre-order, present counters only

  // 0 for counters absent from the sample.
  double percent(Counter c) const noexcept;
};

CpiBreakdown cpi_breakdown(const PmuSample& sample);

enum class Boundness { memory_bound, compute_bound, mixed };
std::string_view to_string(Boundness b) noexcept;

// memory_bound: LSU stalls are a large share of run cycles and dwarf the
// execution-unit stalls. compute_bound: mostly completing instructions with
// little LSU stalling.
struct BoundnessThresholds {
  double min_lsu_percent = 30.0;
  double lsu_to_exec_ratio = 10.0;
  double min_completion_percent = 50.0;
};

Boundness classify_boundness(const CpiBreakdown& breakdown,
                             const BoundnessThresholds& thresholds = {});

}  // namespace nmfft::perf
