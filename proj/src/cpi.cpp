#include "nmfft/cpi.hpp"

#include "nmfft/errors.hpp"

namespace nmfft::perf {

std::string_view counter_name(Counter c) noexcept {
  switch (c) {
    case Counter::run_cyc: return "PM_RUN_CYC";
    case Counter::cmplu_stall: return "PM_CMPLU_STALL";
    case Counter::cmplu_stall_thrd: return "PM_CMPLU_STALL_THRD";
    case Counter::one_plus_ppc_cmpl: return "PM_1PLUS_PPC_CMPL";
    case Counter::ntc_issue_hold: return "PM_NTC_ISSUE_HOLD";
    case Counter::ict_noslot_cyc: return "PM_ICT_NOSLOT_CYC";
    case Counter::cmplu_stall_lsu: return "PM_CMPLU_STALL_LSU";
    case Counter::cmplu_stall_exec_unit: return "PM_CMPLU_STALL_EXEC_UNIT";
  }
  return "?";
}

std::optional<Counter> parse_counter(std::string_view name) noexcept {
  for (Counter c : kAllCounters) {
    if (counter_name(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<Counter> parent(Counter c) noexcept {
  switch (c) {
    case Counter::run_cyc: return std::nullopt;
    case Counter::cmplu_stall_thrd:
    case Counter::cmplu_stall_lsu:
    case Counter::cmplu_stall_exec_unit: return Counter::cmplu_stall;
    default: return Counter::run_cyc;
  }
}

int tree_level(Counter c) noexcept {
  int level = 0;
  for (auto p = parent(c); p; p = parent(*p)) ++level;
  return level;
}

namespace {

// Pre-order of the breakdown tree.
constexpr std::array<Counter, 8> kTreeOrder = {
    Counter::run_cyc,          Counter::cmplu_stall,        Counter::cmplu_stall_thrd,
    Counter::cmplu_stall_lsu,  Counter::cmplu_stall_exec_unit, Counter::one_plus_ppc_cmpl,
    Counter::ntc_issue_hold,   Counter::ict_noslot_cyc,
};

}  // namespace

std::uint64_t PmuSample::value(Counter c) const noexcept {
  const auto it = counters.find(c);
  return it == counters.end() ? 0 : it->second;
}

void PmuSample::validate() const {
  const auto run = counters.find(Counter::run_cyc);
  if (run == counters.end()) {
    throw ValidationError(kernel + ": PM_RUN_CYC", "missing");
  }
  if (run->second == 0) throw ValidationError(kernel + ": PM_RUN_CYC", "must be > 0");

  for (const auto& [counter, count] : counters) {
    const auto up = parent(counter);
    if (!up) continue;
    // An absent intermediate node is skipped; its children are checked
    // against the nearest present ancestor.
    auto ancestor = up;
    while (ancestor && !counters.contains(*ancestor)) ancestor = parent(*ancestor);
    if (!ancestor) continue;
    const std::uint64_t limit = counters.at(*ancestor);
    if (count > limit) {
      throw ValidationError(
          kernel + ": " + std::string(counter_name(counter)) + " <= " +
              std::string(counter_name(*ancestor)),
          "containment violated (" + std::to_string(count) + " > " + std::to_string(limit) + ")");
    }
  }
}

double CpiBreakdown::percent(Counter c) const noexcept {
  for (const auto& e : entries) {
    if (e.counter == c) return e.percent;
  }
  return 0.0;
}

CpiBreakdown cpi_breakdown(const PmuSample& sample) {
  sample.validate();
  const double run = static_cast<double>(sample.value(Counter::run_cyc));
  CpiBreakdown out;
  out.kernel = sample.kernel;
  for (Counter c : kTreeOrder) {
    const auto it = sample.counters.find(c);
    if (it == sample.counters.end()) continue;
    out.entries.push_back({c, tree_level(c), 100.0 * static_cast<double>(it->second) / run});
  }
  return out;
}

std::string_view to_string(Boundness b) noexcept {
  switch (b) {
    case Boundness::memory_bound: return "memory_bound";
    case Boundness::compute_bound: return "compute_bound";
    case Boundness::mixed: return "mixed";
  }
  return "?";
}

Boundness classify_boundness(const CpiBreakdown& breakdown, const BoundnessThresholds& thresholds) {
  const double lsu = breakdown.percent(Counter::cmplu_stall_lsu);
  const double exec = breakdown.percent(Counter::cmplu_stall_exec_unit);
  const double completing = breakdown.percent(Counter::one_plus_ppc_cmpl);

  if (lsu >= thresholds.min_lsu_percent && lsu >= thresholds.lsu_to_exec_ratio * exec) {
    return Boundness::memory_bound;
  }
  if (completing >= thresholds.min_completion_percent && lsu < thresholds.min_lsu_percent) {
    return Boundness::compute_bound;
  }
  return Boundness::mixed;
}

}  // namespace nmfft::perf
