#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nmfft/errors.hpp"
#include "nmfft/ingest.hpp"
#include "nmfft/nmc_model.hpp"
#include "nmfft/projection.hpp"
#include "nmfft/report.hpp"
#include "nmfft/stream2d.hpp"

namespace nmfft::cli {

namespace {

constexpr double kVerifyTolerance = 1e-4;

struct SpecOption {
  std::string path;

  io::SpecFile load() const {
    if (!path.empty()) return io::load_spec(path);
    if (const char* env = std::getenv("NMFFT_SPEC"); env != nullptr && *env != '\0') {
      return io::load_spec(env);
    }
    return io::default_spec();
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

void write_output(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write '" + path + "'");
  file << content;
  if (!file) throw IoError("cannot write '" + path + "'");
}

ComplexVec make_pattern(std::size_t n, const std::string& pattern, std::uint64_t seed) {
  ComplexVec samples(n * n);
  if (pattern == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
    for (auto& s : samples) {
      const float re = dist(rng);
      const float im = dist(rng);
      s = {re, im};
    }
  } else if (pattern == "impulse") {
    samples[0] = 1.0f;
  } else if (pattern == "ones") {
    std::fill(samples.begin(), samples.end(), Complex(1.0f, 0.0f));
  } else if (pattern == "ramp") {
    // Distinct value per cell so orientation mistakes are visible.
    for (std::size_t i = 0; i < samples.size(); ++i) {
      samples[i] = {static_cast<float>(i / n), static_cast<float>(i % n)};
    }
  } else {
    throw ValidationError("pattern", "unknown pattern '" + pattern + "'");
  }
  return samples;
}

void write_grid_file(const std::filesystem::path& path, std::size_t n, const ComplexVec& samples) {
  ComplexGrid grid = ComplexGrid::create_file(path, n);
  for (std::size_t r = 0; r < n; ++r) {
    grid.write_segment(r, 0, std::span<const Complex>(samples).subspan(r * n, n));
  }
  write_grid_descriptor(path, n);
}

// ---------------------------------------------------------------------------

struct Fft2dArgs {
  std::string size;
  std::size_t k = 4;
  std::string backend = "mem";
  std::string in;
  std::string out;
  bool verify = false;
  std::string direction = "fwd";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool trace = false;
};

int run_fft2d(const Fft2dArgs& a, std::ostream& out) {
  std::size_t n = 0;
  if (!a.size.empty()) n = io::parse_size(a.size);
  ComplexVec input;
  if (!a.in.empty()) {
    if (n == 0) n = read_grid_descriptor(a.in);
    input = ComplexGrid::open_file(a.in, n).to_vector();
  } else {
    if (n == 0) throw ValidationError("size", "--size is required without --in");
    input = make_pattern(n, "random", a.seed);
  }
  const Direction dir = a.direction == "inv" ? Direction::inverse : Direction::forward;
  const TileParams tile = TileParams::with_rows(a.k);
  tile.check_divides(n);

  std::optional<ComplexGrid> grid;
  std::filesystem::path temp_path;
  if (a.backend == "file") {
    std::filesystem::path path = a.out;
    if (path.empty()) {
      temp_path = std::filesystem::temp_directory_path() /
                  fmt::format("nmfft-{}-{}.c64", n, static_cast<unsigned long>(::getpid()));
      path = temp_path;
    }
    write_grid_file(path, n, input);
    grid.emplace(ComplexGrid::open_file(path, n));
  } else {
    grid.emplace(ComplexGrid::from_samples(n, input));
  }

  StreamOptions options;
  options.threads = a.threads;
  const StreamTrace trace = fft2d_streamed(*grid, tile, dir, options);

  out << fmt::format("fft2d n={} k={} backend={} direction={}\n", n, tile.rows(), a.backend,
                     a.direction);
  for (std::size_t p = 0; p < trace.passes.size(); ++p) {
    const auto& pass = trace.passes[p];
    out << fmt::format("pass {}: blocks={} bytes_read={} bytes_written={} transposed={}\n", p + 1,
                       pass.blocks, pass.bytes_read, pass.bytes_written,
                       pass.output_transposed ? "yes" : "no");
  }
  out << fmt::format("total bytes moved: {}\n", trace.total_bytes());
  if (a.trace) out << fmt::format("peak staging bytes: {}\n", trace.peak_staging_bytes);

  const ComplexVec result = grid->to_vector();
  if (a.backend == "mem" && !a.out.empty()) write_grid_file(a.out, n, result);
  grid.reset();
  if (!temp_path.empty()) std::filesystem::remove(temp_path);
  if (a.backend == "file" && !a.out.empty()) write_grid_descriptor(a.out, n);

  if (a.verify) {
    const ComplexGrid reference =
        fft2d_reference(ComplexGrid::from_samples(n, std::move(input)), dir);
    const double err = relative_l2_error(result, reference.to_vector());
    const bool ok = err <= kVerifyTolerance;
    out << fmt::format("max rel err {:.3e} {} 1e-4\n", err, ok ? "<=" : ">");
    return ok ? 0 : 1;
  }
  return 0;
}

struct EstimateArgs {
  SpecOption spec;
  std::string sizes = "4k,8k,16k,32k";
  std::string configs = "all";
  std::string format = "table";
  std::string out;
};

int run_estimate(const EstimateArgs& a, std::ostream& out) {
  const auto spec = a.spec.load();
  std::vector<std::size_t> sizes;
  for (const auto& s : split_list(a.sizes)) sizes.push_back(io::parse_size(s));
  std::vector<nmc::NmcConfig> configs;
  if (a.configs == "all") {
    configs = spec.nmc_configs;
  } else {
    for (const auto& name : split_list(a.configs)) configs.push_back(spec.nmc_config(name));
  }
  const auto table = io::build_estimate_table(std::move(sizes), std::move(configs));
  write_output(io::emit_report(table, io::parse_report_format(a.format)), a.out, out);
  return 0;
}

struct PipelineArgs {
  SpecOption spec;
  std::string size = "4k";
  std::string config = "ddr4x1";
  std::size_t k = 4;
  unsigned accelerators = 0;
  double accel_gflops = 0.0;
  bool use_min = false;
};

int run_pipeline(const PipelineArgs& a, std::ostream& out) {
  const auto spec = a.spec.load();
  const std::size_t n = io::parse_size(a.size);
  nmc::NmcConfig cfg = spec.nmc_config(a.config);
  if (a.accel_gflops > 0.0) cfg.accel_flops = a.accel_gflops * 1e9;
  if (a.accelerators > 0) cfg.accelerators = a.accelerators;
  if (a.use_min) cfg.accelerators = nmc::min_accelerators(n, cfg);

  const auto closed = nmc::estimate_fft2d_time(n, cfg);
  const auto sim = nmc::simulate_pipeline(n, cfg, TileParams::with_rows(a.k));
  out << fmt::format("config {} ({:g} GiB/s), n={}, k={}, accelerators={}\n",
                     cfg.display_label(), cfg.aggregate_bw_gib(), n, a.k, cfg.accelerators);
  out << fmt::format("bandwidth time   {:.6f} s\n", closed.bandwidth_time_s);
  out << fmt::format("compute time     {:.6f} s\n", closed.compute_time_s);
  out << fmt::format("closed form      {:.6f} s ({}-bound)\n", closed.time_s,
                     nmc::to_string(closed.bottleneck));
  out << fmt::format("simulated        {:.6f} s over {} blocks\n", sim.time_s, sim.blocks_scheduled);
  out << fmt::format("overhead         {:+.2f} %\n", 100.0 * (sim.time_s / closed.time_s - 1.0));
  out << fmt::format("min accelerators {}\n", closed.min_accelerators_for_overlap);
  return 0;
}

struct RooflineArgs {
  SpecOption spec;
  std::string machine;
  std::string points;
  std::string sizes = "4k,8k,16k,32k";
  std::string convention = "gib_scaled";
  bool exact_times = false;
  bool no_model = false;
  std::string format = "csv";
  std::string out;
};

int run_roofline(const RooflineArgs& a, std::ostream& out) {
  const auto spec = a.spec.load();
  io::RooflineReport report{spec.machine(a.machine), {}};
  if (!a.points.empty()) {
    for (const auto& p : io::parse_roofline_points(io::read_text_file(a.points))) {
      report.points.push_back(perf::roofline_classify(p.kernel, p.ai, p.perf_tflops, report.machine));
    }
  }
  if (report.machine.nmc_config && !a.no_model) {
    std::vector<std::size_t> sizes;
    for (const auto& s : split_list(a.sizes)) sizes.push_back(io::parse_size(s));
    auto modeled = io::model_fft_points(report.machine, spec.nmc_config(*report.machine.nmc_config),
                                        sizes, perf::parse_ai_convention(a.convention),
                                        !a.exact_times);
    report.points.insert(report.points.end(), modeled.begin(), modeled.end());
  }
  write_output(io::emit_report(report, io::parse_report_format(a.format)), a.out, out);
  return 0;
}

struct CpiArgs {
  std::string in;
  std::string format = "table";
  std::string out;
  perf::BoundnessThresholds thresholds;
};

int run_cpi(const CpiArgs& a, std::ostream& out) {
  const auto samples = io::load_counter_dump(a.in);
  const auto report = io::build_cpi_report(samples, a.thresholds);
  write_output(io::emit_report(report, io::parse_report_format(a.format)), a.out, out);
  return 0;
}

struct AmdahlArgs {
  std::string times;
  std::string accelerated = "fft";
  double new_time = 0.0;
};

int run_amdahl(const AmdahlArgs& a, std::ostream& out) {
  std::map<std::string, double> times;
  for (const auto& item : split_list(a.times)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("times", "expected kernel=seconds, got '" + item + "'");
    }
    const auto key = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("times", "bad time in '" + item + "'");
    }
    if (!times.emplace(key, value).second) throw ValidationError("times", "duplicate kernel " + key);
  }
  const auto r = perf::amdahl_projection(times, a.accelerated, a.new_time);
  out << fmt::format("{} share: {:.1f} %\n", a.accelerated, r.share_percent);
  out << fmt::format("overall speedup: {:.4f}\n", r.overall_speedup);
  return 0;
}

struct GenGridArgs {
  std::string size;
  std::uint64_t seed = 1;
  std::string pattern = "random";
  std::string out;
};

int run_gen_grid(const GenGridArgs& a, std::ostream& out) {
  const std::size_t n = io::parse_size(a.size);
  write_grid_file(a.out, n, make_pattern(n, a.pattern, a.seed));
  out << fmt::format("wrote {} ({}x{} c64le, {} bytes) and {}\n", a.out, n, n,
                     n * n * kSampleBytes, descriptor_path(a.out).string());
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streamed 2D FFT engine and near-memory performance model", "nmfft"};
  app.require_subcommand(1);
  std::function<int()> action;

  Fft2dArgs fft2d;
  auto* c_fft = app.add_subcommand(
      "fft2d",
      "Run the two-pass streamed 2D FFT (row 1D FFTs with k-row blocked transposed\n"
      "write-back, as on the Access Processor) and optionally verify it against a\n"
      "row-column reference.");
  c_fft->add_option("--size", fft2d.size, "Grid side, e.g. 64 or 4k");
  c_fft->add_option("--k", fft2d.k, "Rows per block (access width / 8 bytes)")->capture_default_str();
  c_fft->add_option("--backend", fft2d.backend, "Grid storage")
      ->check(CLI::IsMember({"mem", "file"}))
      ->capture_default_str();
  c_fft->add_option("--in", fft2d.in, "Input grid file (raw c64le); side from --size or .desc");
  c_fft->add_option("--out", fft2d.out, "Write the transformed grid here (plus .desc)");
  c_fft->add_flag("--verify", fft2d.verify, "Compare with the reference 2D FFT");
  c_fft->add_option("--direction", fft2d.direction)
      ->check(CLI::IsMember({"fwd", "inv"}))
      ->capture_default_str();
  c_fft->add_option("--seed", fft2d.seed, "Seed for the random input grid")->capture_default_str();
  c_fft->add_option("--threads", fft2d.threads, "Block worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_fft->add_flag("--trace", fft2d.trace, "Print staging-buffer statistics");
  c_fft->callback([&] { action = [&] { return run_fft2d(fft2d, out); }; });

  EstimateArgs est;
  auto* c_est = app.add_subcommand(
      "estimate",
      "Bandwidth-bound execution time of one 2D FFT on the Access Processor for\n"
      "each grid size and memory configuration (the DDR4/HBM2 estimate table).");
  c_est->add_option("--spec", est.spec.path, "Platform spec file (default: built-in or $NMFFT_SPEC)");
  c_est->add_option("--sizes", est.sizes, "Comma-separated grid sides")->capture_default_str();
  c_est->add_option("--configs", est.configs, "Comma-separated NMC config names, or 'all'")
      ->capture_default_str();
  c_est->add_option("--format", est.format)
      ->check(CLI::IsMember({"table", "text-table", "csv", "svg"}))
      ->capture_default_str();
  c_est->add_option("--out", est.out, "Output file (default stdout)");
  c_est->callback([&] { action = [&] { return run_estimate(est, out); }; });

  PipelineArgs pipe;
  auto* c_pipe = app.add_subcommand(
      "pipeline",
      "Discrete-event simulation of overlapped block reads, accelerator 1D FFTs and\n"
      "write-backs, compared with the closed-form bandwidth estimate.");
  c_pipe->add_option("--spec", pipe.spec.path, "Platform spec file");
  c_pipe->add_option("--size", pipe.size)->capture_default_str();
  c_pipe->add_option("--config", pipe.config, "NMC config name")->capture_default_str();
  c_pipe->add_option("--k", pipe.k)->capture_default_str();
  c_pipe->add_option("--accelerators", pipe.accelerators, "Override the accelerator count");
  c_pipe->add_flag("--min-accelerators", pipe.use_min, "Use the smallest fully-overlapping count");
  c_pipe->add_option("--accel-gflops", pipe.accel_gflops, "Per-accelerator throughput override");
  c_pipe->callback([&] { action = [&] { return run_pipeline(pipe, out); }; });

  RooflineArgs roof;
  auto* c_roof = app.add_subcommand(
      "roofline",
      "Roofline ceilings (peak = GHz x ops/core x cores x sockets / 1000 for CPUs)\n"
      "and classified points: external measurements from --points plus modeled AP\n"
      "2D FFT points for machines linked to an NMC config.");
  c_roof->add_option("--spec", roof.spec.path, "Platform spec file");
  c_roof->add_option("--machine", roof.machine, "Machine name from the spec")->required();
  c_roof->add_option("--points", roof.points, "CSV of kernel,ai,perf_tflops to classify");
  c_roof->add_option("--sizes", roof.sizes, "Grid sides for modeled FFT points")->capture_default_str();
  c_roof->add_option("--ai-convention", roof.convention)
      ->check(CLI::IsMember({"gib_scaled", "canonical"}))
      ->capture_default_str();
  c_roof->add_flag("--exact-times", roof.exact_times,
                   "Use unrounded modeled times instead of the printed two-digit ones");
  c_roof->add_flag("--no-model", roof.no_model, "Skip modeled FFT points");
  c_roof->add_option("--format", roof.format)
      ->check(CLI::IsMember({"csv", "svg", "table", "text-table"}))
      ->capture_default_str();
  c_roof->add_option("--out", roof.out, "Output file (default stdout)");
  c_roof->callback([&] { action = [&] { return run_roofline(roof, out); }; });

  CpiArgs cpi;
  auto* c_cpi = app.add_subcommand(
      "cpi",
      "Power9 CPI breakdown (counters as % of PM_RUN_CYC) and memory/compute\n"
      "boundness classification from a kernel,counter,value dump.");
  c_cpi->add_option("--in", cpi.in, "Counter dump CSV")->required();
  c_cpi->add_option("--format", cpi.format)
      ->check(CLI::IsMember({"table", "text-table", "csv", "svg"}))
      ->capture_default_str();
  c_cpi->add_option("--out", cpi.out, "Output file (default stdout)");
  c_cpi->add_option("--min-lsu", cpi.thresholds.min_lsu_percent)->capture_default_str();
  c_cpi->add_option("--lsu-exec-ratio", cpi.thresholds.lsu_to_exec_ratio)->capture_default_str();
  c_cpi->add_option("--min-cmpl", cpi.thresholds.min_completion_percent)->capture_default_str();
  c_cpi->callback([&] { action = [&] { return run_cpi(cpi, out); }; });

  AmdahlArgs amd;
  auto* c_amd = app.add_subcommand(
      "amdahl",
      "Share of the application time spent in one kernel (e.g. the 2D FFT inside\n"
      "image-domain gridding) and the end-to-end speedup after accelerating it.");
  c_amd->add_option("--times", amd.times, "kernel=seconds,... e.g. fft=47,gridder=30")->required();
  c_amd->add_option("--accelerated", amd.accelerated)->capture_default_str();
  c_amd->add_option("--new-time", amd.new_time, "Accelerated kernel time in seconds")->required();
  c_amd->callback([&] { action = [&] { return run_amdahl(amd, out); }; });

  GenGridArgs gen;
  auto* c_gen = app.add_subcommand(
      "gen-grid", "Write a synthetic raw c64le grid file plus its .desc sidecar.");
  c_gen->add_option("--size", gen.size)->required();
  c_gen->add_option("--seed", gen.seed)->capture_default_str();
  c_gen->add_option("--pattern", gen.pattern)
      ->check(CLI::IsMember({"random", "impulse", "ones", "ramp"}))
      ->capture_default_str();
  c_gen->add_option("--out", gen.out)->required();
  c_gen->callback([&] { action = [&] { return run_gen_grid(gen, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "nmfft: " << e.what() << "\n";
    const CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    err << target->help();
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const std::exception& e) {
    err << "nmfft: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nmfft::cli
