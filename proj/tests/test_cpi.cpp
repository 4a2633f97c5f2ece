#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nmfft/cpi.hpp"
#include "nmfft/errors.hpp"

using namespace nmfft;
using namespace nmfft::perf;

namespace {

// Builds a sample from percentages of a fixed run-cycle count.
PmuSample from_percent(std::string kernel, double cmpl, double stall, double lsu, double exec) {
  const double run = 1e9;
  PmuSample s;
  s.kernel = std::move(kernel);
  s.counters[Counter::run_cyc] = static_cast<std::uint64_t>(run);
  s.counters[Counter::one_plus_ppc_cmpl] = static_cast<std::uint64_t>(cmpl * run / 100);
  s.counters[Counter::cmplu_stall] = static_cast<std::uint64_t>(stall * run / 100);
  s.counters[Counter::cmplu_stall_lsu] = static_cast<std::uint64_t>(lsu * run / 100);
  s.counters[Counter::cmplu_stall_exec_unit] = static_cast<std::uint64_t>(exec * run / 100);
  return s;
}

}  // namespace

TEST_CASE("counter names and tree", "[cpi]") {
  for (auto c : kAllCounters) {
    CHECK(parse_counter(counter_name(c)) == c);
  }
  CHECK_FALSE(parse_counter("PM_L1_MISS").has_value());
  CHECK_FALSE(parent(Counter::run_cyc).has_value());
  CHECK(parent(Counter::cmplu_stall_lsu) == Counter::cmplu_stall);
  CHECK(parent(Counter::cmplu_stall_exec_unit) == Counter::cmplu_stall);
  CHECK(parent(Counter::one_plus_ppc_cmpl) == Counter::run_cyc);
  CHECK(tree_level(Counter::run_cyc) == 0);
  CHECK(tree_level(Counter::cmplu_stall) == 1);
  CHECK(tree_level(Counter::cmplu_stall_lsu) == 2);
}

TEST_CASE("cpi_breakdown of stream-add", "[cpi]") {
  const auto b = cpi_breakdown(from_percent("stream-add", 13, 70, 67, 2));
  CHECK(b.kernel == "stream-add");
  CHECK(std::lround(b.percent(Counter::cmplu_stall)) == 70);
  CHECK(std::lround(b.percent(Counter::cmplu_stall_lsu)) == 67);
  CHECK(std::lround(b.percent(Counter::cmplu_stall_exec_unit)) == 2);
  CHECK(std::lround(b.percent(Counter::one_plus_ppc_cmpl)) == 13);
  CHECK(b.percent(Counter::run_cyc) == 100.0);
  REQUIRE_FALSE(b.entries.empty());
  CHECK(b.entries.front().counter == Counter::run_cyc);
  CHECK(b.entries.front().level == 0);
}

TEST_CASE("cpi_breakdown trivial cases", "[cpi]") {
  PmuSample only_run;
  only_run.kernel = "idle";
  only_run.counters[Counter::run_cyc] = 1000;
  for (auto c : kAllCounters) {
    PmuSample s = only_run;
    if (c != Counter::run_cyc) s.counters[c] = 0;
    const auto b = cpi_breakdown(s);
    if (c != Counter::run_cyc) CHECK(b.percent(c) == 0.0);
  }

  const auto sat = cpi_breakdown(from_percent("sat", 10, 40, 40, 0));
  CHECK(sat.percent(Counter::cmplu_stall_lsu) == sat.percent(Counter::cmplu_stall));
}

TEST_CASE("containment violations name the edge", "[cpi][errors]") {
  auto s = from_percent("k", 10, 40, 45, 0);
  try {
    s.validate();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.where() == "k: PM_CMPLU_STALL_LSU <= PM_CMPLU_STALL");
  }

  PmuSample no_run;
  no_run.kernel = "k";
  no_run.counters[Counter::cmplu_stall] = 5;
  CHECK_THROWS_AS(cpi_breakdown(no_run), ValidationError);

  PmuSample zero_run;
  zero_run.kernel = "k";
  zero_run.counters[Counter::run_cyc] = 0;
  CHECK_THROWS_AS(cpi_breakdown(zero_run), ValidationError);

  auto over = from_percent("k", 120, 10, 0, 0);
  CHECK_THROWS_AS(cpi_breakdown(over), ValidationError);

  // Without PM_CMPLU_STALL the leaf is checked against the root.
  auto missing_mid = from_percent("k", 10, 0, 20, 0);
  missing_mid.counters.erase(Counter::cmplu_stall);
  CHECK_NOTHROW(cpi_breakdown(missing_mid));
}

TEST_CASE("children never exceed their parent", "[cpi][property]") {
  std::uint64_t state = 99;
  auto next = [&](std::uint64_t bound) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return bound == 0 ? 0 : (state >> 11) % (bound + 1);
  };
  for (int i = 0; i < 500; ++i) {
    PmuSample s;
    s.kernel = "gen";
    const std::uint64_t run = 1 + next(1'000'000'000);
    s.counters[Counter::run_cyc] = run;
    const std::uint64_t stall = next(run);
    s.counters[Counter::cmplu_stall] = stall;
    s.counters[Counter::cmplu_stall_lsu] = next(stall);
    s.counters[Counter::cmplu_stall_exec_unit] = next(stall);
    s.counters[Counter::cmplu_stall_thrd] = next(stall);
    s.counters[Counter::one_plus_ppc_cmpl] = next(run);
    s.counters[Counter::ntc_issue_hold] = next(run);
    s.counters[Counter::ict_noslot_cyc] = next(run);
    const auto b = cpi_breakdown(s);
    for (const auto& e : b.entries) {
      CHECK(e.percent >= 0.0);
      if (auto p = parent(e.counter)) CHECK(e.percent <= b.percent(*p));
    }
  }
}

TEST_CASE("classify_boundness", "[cpi]") {
  CHECK(classify_boundness(cpi_breakdown(from_percent("mac", 74, 9, 0, 9))) ==
        Boundness::compute_bound);
  CHECK(classify_boundness(cpi_breakdown(from_percent("sgemm", 84, 13, 10, 3))) ==
        Boundness::compute_bound);
  CHECK(classify_boundness(cpi_breakdown(from_percent("stream-add", 13, 70, 67, 2))) ==
        Boundness::memory_bound);
  CHECK(classify_boundness(cpi_breakdown(from_percent("fft-16k", 6, 86, 83, 2))) ==
        Boundness::memory_bound);
  CHECK(classify_boundness(cpi_breakdown(from_percent("fft-8k", 13, 65, 57, 5))) ==
        Boundness::memory_bound);
  CHECK(classify_boundness(cpi_breakdown(from_percent("mid", 30, 50, 20, 20))) ==
        Boundness::mixed);

  BoundnessThresholds loose;
  loose.min_lsu_percent = 5;
  loose.lsu_to_exec_ratio = 2;
  CHECK(classify_boundness(cpi_breakdown(from_percent("sgemm", 84, 13, 10, 3)), loose) ==
        Boundness::memory_bound);
  CHECK(to_string(Boundness::memory_bound) == "memory_bound");
}
