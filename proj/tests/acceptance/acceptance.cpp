// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "nmfft/cpi.hpp"
#include "nmfft/fft.hpp"
#include "nmfft/grid.hpp"
#include "nmfft/ingest.hpp"
#include "nmfft/nmc_model.hpp"
#include "nmfft/projection.hpp"
#include "nmfft/report.hpp"
#include "nmfft/roofline.hpp"
#include "nmfft/stream2d.hpp"

using namespace nmfft;

namespace {

// Collects failed checks for one criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void near_rel(double actual, double expected, double tol, const std::string& what) {
    const bool ok = std::abs(actual - expected) <= tol * std::abs(expected);
    expect(ok, fmt::format("{}: got {:.6g}, want {:.6g} (rel tol {:g})", what, actual, expected, tol));
  }
  void note(const std::string& line) { notes_.push_back(line); }

  bool passed() const noexcept { return failed_ == 0; }
  int checks() const noexcept { return checks_; }
  const std::vector<std::string>& failures() const noexcept { return failures_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }

 private:
  int checks_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

ComplexVec random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  ComplexVec v(n);
  for (auto& x : v) {
    const float re = dist(rng);
    const float im = dist(rng);
    x = {re, im};
  }
  return v;
}

double energy(const ComplexVec& v) {
  double e = 0.0;
  for (const auto& x : v) e += std::norm(std::complex<double>(x));
  return e;
}

const std::vector<std::size_t> kTableSizes{4096, 8192, 16384, 32768};
const std::vector<const char*> kTableConfigs{"ddr4x1", "ddr4x2", "hbm2x1", "hbm2x32"};

void execution_times(Checker& c) {
  const char* expected[4][4] = {{"0.033", "0.017", "0.05", "0.0016"},
                                {"0.13", "0.067", "0.20", "0.0063"},
                                {"0.53", "0.27", "0.80", "0.025"},
                                {"2.1", "1.1", "3.2", "0.10"}};
  const auto& spec = io::default_spec();
  std::vector<nmc::NmcConfig> configs;
  for (const char* name : kTableConfigs) configs.push_back(spec.nmc_config(name));
  const auto table = io::build_estimate_table(kTableSizes, configs);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double t = table.cells[i][j].time_s;
      c.expect(io::round_to_printed(t) == std::stod(expected[i][j]),
               fmt::format("{} {}: printed {} vs {}", io::size_label(kTableSizes[i]),
                           kTableConfigs[j], io::format_seconds(t), expected[i][j]));
    }
  }
  c.note("16 cells regenerated");
}

void peak_formula(Checker& c) {
  const auto& p9 = io::default_spec().machine("power9");
  const double peak = perf::peak_flops_cpu(p9);
  c.expect(peak == 2.6752, fmt::format("power9 peak {:.6f} != 2.6752", peak));
  c.near_rel(p9.ridge_ai(), 7.87, 0.005, "power9 ridge");
  c.note(fmt::format("peak {} TFLOP/s, ridge {:.4f} flop/byte", peak, p9.ridge_ai()));
}

void roofline_points(Checker& c) {
  const auto& spec = io::default_spec();
  const double hbm[] = {1.2583, 1.3848, 1.5032, 1.6106};
  const double ddr[] = {0.1184, 0.1302, 0.1392, 0.1464};
  const double ai[] = {16.1061, 17.4483, 18.7905, 20.1327};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t n = kTableSizes[i];
    const double t_hbm = io::round_to_printed(
        nmc::estimate_fft2d_time(n, spec.nmc_config("hbm2x32")).time_s);
    const double t_ddr = io::round_to_printed(
        nmc::estimate_fft2d_time(n, spec.nmc_config("ddr4x2")).time_s);
    c.near_rel(perf::attained_perf(n, t_hbm), hbm[i], 1e-3, fmt::format("HBM2 perf n={}", n));
    c.near_rel(perf::attained_perf(n, t_ddr), ddr[i], 1e-3, fmt::format("DDR4 perf n={}", n));
    c.near_rel(perf::fft2d_ai(n, perf::AiConvention::gib_scaled), ai[i], 1e-3,
               fmt::format("gib-scaled ai n={}", n));
  }
  c.note("12 coordinates within 0.1%");
}

ComplexGrid make_file_grid(const std::filesystem::path& path, const ComplexVec& samples,
                           std::size_t n) {
  auto grid = ComplexGrid::create_file(path, n);
  for (std::size_t r = 0; r < n; ++r) {
    grid.write_segment(r, 0, std::span<const Complex>(samples).subspan(r * n, n));
  }
  return grid;
}

void fft_correctness(Checker& c) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = std::size_t{1} << (1 + rng() % 12);
    const auto x = random_vector(n, rng());
    const auto err = relative_l2_error(fft1d(x, Direction::forward), dft_oracle(x, Direction::forward));
    c.expect(err <= 1e-4, fmt::format("fft1d vs oracle n={} err={:.3e}", n, err));
  }

  for (std::size_t n : {16u, 64u, 256u}) {
    const auto input = random_vector(n * n, 77 + n);
    auto grid = ComplexGrid::from_samples(n, input);
    fft2d_streamed(grid, TileParams{}, Direction::forward);
    const double e_in = energy(input);
    const double e_out = energy(grid.to_vector()) / static_cast<double>(n * n);
    c.near_rel(e_out, e_in, 1e-4, fmt::format("Parseval n={}", n));
    fft2d_streamed(grid, TileParams{}, Direction::inverse);
    const auto err = relative_l2_error(grid.to_vector(), input);
    c.expect(err <= 1e-4, fmt::format("2D round trip n={} err={:.3e}", n, err));
  }

  const auto scratch_dir = std::filesystem::temp_directory_path();
  int combos = 0;
  for (std::size_t n : {16u, 64u, 256u, 1024u}) {
    const auto input = random_vector(n * n, n);
    for (auto dir : {Direction::forward, Direction::inverse}) {
      const auto ref = fft2d_reference(ComplexGrid::from_samples(n, input), dir).to_vector();
      for (std::size_t k : {2u, 4u, 8u}) {
        const auto tile = TileParams::with_rows(k);
        auto mem = ComplexGrid::from_samples(n, input);
        fft2d_streamed(mem, tile, dir);
        const auto err_mem = relative_l2_error(mem.to_vector(), ref);
        c.expect(err_mem <= 1e-4, fmt::format("mem n={} k={} err={:.3e}", n, k, err_mem));

        const auto path = scratch_dir / fmt::format("nmfft_acceptance_{}_{}.c64", n, k);
        {
          auto disk = make_file_grid(path, input, n);
          fft2d_streamed(disk, tile, dir);
          const auto err_file = relative_l2_error(disk.to_vector(), ref);
          c.expect(err_file <= 1e-4, fmt::format("file n={} k={} err={:.3e}", n, k, err_file));
        }
        std::filesystem::remove(path);
        combos += 2;
      }
    }
  }
  c.note(fmt::format("200 1D vectors, {} streamed combinations", combos));
}

void byte_accounting(Checker& c) {
  const auto& cfg = io::default_spec().nmc_config("ddr4x1");
  int cases = 0;
  for (std::size_t n = 4; n <= 1024; n *= 2) {
    for (std::size_t k = 1; k <= n && k <= 16; k *= 2) {
      auto grid = ComplexGrid::in_memory(n);
      const auto trace = fft2d_streamed(grid, TileParams::with_rows(k), Direction::forward);
      const std::uint64_t want = 32ull * n * n;
      c.expect(trace.total_bytes() == want,
               fmt::format("n={} k={} bytes {} != {}", n, k, trace.total_bytes(), want));
      c.expect(nmc::traffic_bytes(n) == static_cast<double>(trace.total_bytes()),
               fmt::format("model traffic n={}", n));
      const auto from_trace = nmc::estimate_from_traffic(n, double(trace.total_bytes()), cfg);
      c.expect(from_trace.time_s == nmc::estimate_fft2d_time(n, cfg).time_s,
               fmt::format("model time from trace n={}", n));
      ++cases;
    }
  }
  auto big = ComplexGrid::in_memory(4096);
  const auto trace = fft2d_streamed(big, TileParams{}, Direction::forward);
  c.expect(trace.total_bytes() == 536870912ull, "n=4096 k=4 total bytes");
  c.note(fmt::format("{} (n,k) pairs plus n=4096", cases));
}

void pipeline_convergence(Checker& c) {
  const auto base = io::default_spec().nmc_config("ddr4x1");
  for (std::size_t n : {4096u, 8192u}) {
    auto cfg = base;
    const unsigned amin = nmc::min_accelerators(n, cfg);
    cfg.accelerators = amin;
    const double closed = nmc::estimate_fft2d_time(n, cfg).time_s;
    const double sim = nmc::simulate_pipeline(n, cfg, TileParams{}).time_s;
    c.expect(sim <= closed * 1.05 && sim >= closed * (1 - 1e-9),
             fmt::format("n={} a={} sim {:.6f} vs closed {:.6f}", n, amin, sim, closed));
    c.note(fmt::format("n={} min_accelerators={} overhead {:+.3f}%", n, amin,
                       100.0 * (sim / closed - 1.0)));

    double prev = INFINITY;
    for (unsigned a = 1; a <= 2 * amin; ++a) {
      cfg.accelerators = a;
      const double t = nmc::simulate_pipeline(n, cfg, TileParams{}).time_s;
      c.expect(t <= prev * (1 + 1e-12), fmt::format("n={} a={} not monotone ({} > {})", n, a, t, prev));
      prev = t;
    }
  }
}

void cpi_classification(Checker& c) {
  const std::filesystem::path dir = NMFFT_DATA_DIR;
  const auto micro = io::build_cpi_report(io::load_counter_dump(dir / "microbench_counters.csv"));
  const std::pair<const char*, perf::Boundness> want_micro[] = {
      {"mac", perf::Boundness::compute_bound},
      {"sgemm", perf::Boundness::compute_bound},
      {"stream-add", perf::Boundness::memory_bound}};
  c.expect(micro.rows.size() == 3, "three micro-benchmarks");
  for (std::size_t i = 0; i < micro.rows.size() && i < 3; ++i) {
    c.expect(micro.rows[i].kernel == want_micro[i].first, "kernel order");
    c.expect(micro.classes[i] == want_micro[i].second,
             fmt::format("{} classified {}", micro.rows[i].kernel, perf::to_string(micro.classes[i])));
  }

  const auto idg = io::build_cpi_report(io::load_counter_dump(dir / "idg_counters.csv"));
  std::vector<double> fft_lsu;
  for (std::size_t i = 0; i < idg.rows.size(); ++i) {
    const auto& row = idg.rows[i];
    const double lsu = row.percent(perf::Counter::cmplu_stall_lsu);
    c.note(fmt::format("{}: CMPL {:.0f} STALL {:.0f} LSU {:.0f} EXEC {:.0f} -> {}", row.kernel,
                       row.percent(perf::Counter::one_plus_ppc_cmpl),
                       row.percent(perf::Counter::cmplu_stall), lsu,
                       row.percent(perf::Counter::cmplu_stall_exec_unit),
                       perf::to_string(idg.classes[i])));
    if (row.kernel.starts_with("fft-")) {
      c.expect(idg.classes[i] == perf::Boundness::memory_bound, row.kernel + " memory_bound");
      fft_lsu.push_back(lsu);
    } else {
      c.expect(idg.classes[i] != perf::Boundness::memory_bound, row.kernel + " not memory_bound");
    }
  }
  c.expect(fft_lsu.size() == 3, "three FFT sizes");
  if (fft_lsu.size() == 3) {
    c.expect(std::lround(fft_lsu[1]) == 57, fmt::format("fft-8k LSU {:.0f}", fft_lsu[1]));
    c.expect(std::lround(fft_lsu[2]) == 83, fmt::format("fft-16k LSU {:.0f}", fft_lsu[2]));
    c.expect(fft_lsu[2] > fft_lsu[1], "LSU strictly increasing 8k -> 16k");
  }
}

void amdahl_shares(Checker& c) {
  for (double share : {2.0, 7.0, 47.0}) {
    const std::map<std::string, double> times{{"fft", share}, {"gridder", (100.0 - share) * 0.6},
                                              {"degridder", (100.0 - share) * 0.4}};
    const auto r = perf::amdahl_projection(times, "fft", share);
    c.near_rel(r.share_percent, share, 1e-12, fmt::format("share {}%", share));
    c.near_rel(r.overall_speedup, 1.0, 1e-12, "unchanged time gives 1x");
  }
  const std::map<std::string, double> times{{"fft", 47.0}, {"other", 53.0}};
  const auto limit = perf::amdahl_projection(times, "fft", 0.0);
  c.near_rel(limit.overall_speedup, 1.887, 1e-3, "47% limit");
  c.note(fmt::format("47% share limit {:.4f}x", limit.overall_speedup));
}

void speedup_sanity(Checker& c) {
  const std::filesystem::path dir = NMFFT_DATA_DIR;
  double p9_perf = 0.0;
  for (const auto& p : io::parse_roofline_points(io::read_text_file(dir / "power9_idg_points.csv"))) {
    if (p.kernel == "FFT 16k") p9_perf = p.perf_tflops;
  }
  c.expect(p9_perf > 0.0, "Power9 FFT 16k point present");
  if (p9_perf <= 0.0) return;
  const std::size_t n = 16384;
  const double p9_time = nmc::fft2d_flops(n) / (p9_perf * 1e12);
  const double ap_time = io::round_to_printed(
      nmc::estimate_fft2d_time(n, io::default_spec().nmc_config("hbm2x32")).time_s);
  const double s = perf::speedup(p9_time, ap_time);
  c.near_rel(s, 150.0, 0.05, "Power9 vs AP-HBM2 16k speedup");
  c.expect(s >= 120.0, fmt::format("speedup {:.1f} < 120", s));
  c.note(fmt::format("{:.3f} s / {} s = {:.1f}x", p9_time, ap_time, s));
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<void(Checker&)> run;
  };
  const Criterion criteria[] = {
      {1, "execution-time table", execution_times},
      {2, "peak-performance formula and ridge", peak_formula},
      {3, "roofline point back-computation", roofline_points},
      {4, "FFT correctness properties", fft_correctness},
      {5, "byte-accounting invariant", byte_accounting},
      {6, "pipeline convergence and monotonicity", pipeline_convergence},
      {7, "CPI classification", cpi_classification},
      {8, "Amdahl shares", amdahl_shares},
      {9, "speedup sanity", speedup_sanity},
  };

  int failed = 0;
  for (const auto& crit : criteria) {
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%d checks, %.2f s)\n", c.passed() ? "PASS" : "FAIL",
                crit.id, crit.title, c.checks(), secs);
    for (const auto& n : c.notes()) std::printf("    %s\n", n.c_str());
    for (const auto& f : c.failures()) std::printf("    failed: %s\n", f.c_str());
    if (!c.passed()) ++failed;
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
