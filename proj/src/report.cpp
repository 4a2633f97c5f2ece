#include "nmfft/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include <fmt/format.h>

#include "nmfft/errors.hpp"

namespace nmfft::io {

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "svg") return ReportFormat::svg;
  if (text == "table" || text == "text-table") return ReportFormat::table;
  throw ValidationError("format", "unsupported format '" + std::string(text) + "'");
}

std::string format_seconds(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.2g", seconds);
  return buf;
}

double round_to_printed(double seconds) { return std::stod(format_seconds(seconds)); }

std::string format_fixed4(double value) { return fmt::format("{:.4f}", value); }

std::string size_label(std::size_t n) {
  if (n >= 1024 && n % 1024 == 0) return fmt::format("{}k", n / 1024);
  return std::to_string(n);
}

std::size_t parse_size(std::string_view text) {
  std::size_t multiplier = 1;
  std::string_view digits = text;
  if (!digits.empty() && (digits.back() == 'k' || digits.back() == 'K')) {
    multiplier = 1024;
    digits.remove_suffix(1);
  }
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || value == 0) {
    throw ValidationError("size", "cannot parse size '" + std::string(text) + "'");
  }
  return value * multiplier;
}

EstimateTable build_estimate_table(std::vector<std::size_t> sizes,
                                   std::vector<nmc::NmcConfig> configs) {
  EstimateTable t;
  t.sizes = std::move(sizes);
  t.configs = std::move(configs);
  for (std::size_t n : t.sizes) {
    auto& row = t.cells.emplace_back();
    for (const auto& cfg : t.configs) row.push_back(nmc::estimate_fft2d_time(n, cfg));
  }
  return t;
}

std::vector<perf::RooflinePoint> model_fft_points(const perf::MachineSpec& machine,
                                                  const nmc::NmcConfig& cfg,
                                                  const std::vector<std::size_t>& sizes,
                                                  perf::AiConvention convention,
                                                  bool printed_times) {
  std::vector<perf::RooflinePoint> points;
  for (std::size_t n : sizes) {
    double t = nmc::estimate_fft2d_time(n, cfg).time_s;
    if (printed_times) t = round_to_printed(t);
    points.push_back(perf::roofline_classify("FFT " + size_label(n), perf::fft2d_ai(n, convention),
                                             perf::attained_perf(n, t), machine));
  }
  return points;
}

CpiReport build_cpi_report(const std::vector<perf::PmuSample>& samples,
                           const perf::BoundnessThresholds& thresholds) {
  CpiReport r;
  for (const auto& s : samples) {
    r.rows.push_back(perf::cpi_breakdown(s));
    r.classes.push_back(perf::classify_boundness(r.rows.back(), thresholds));
  }
  return r;
}

namespace {

std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += " | ";
      line += c + 1 == row.size() ? row[c] : pad(row[c], widths[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

// Log-log plot of the roof and the points.
std::string render_roofline_svg(const RooflineReport& report) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;
  const auto& m = report.machine;
  const double peak = m.peak_tflops();
  const double ridge = m.ridge_ai();

  double ai_lo = ridge, ai_hi = ridge, perf_lo = peak, perf_hi = peak;
  for (const auto& p : report.points) {
    ai_lo = std::min(ai_lo, p.ai);
    ai_hi = std::max(ai_hi, p.ai);
    if (p.perf_tflops > 0) perf_lo = std::min(perf_lo, p.perf_tflops);
    perf_hi = std::max(perf_hi, p.perf_tflops);
  }
  const double x0 = std::floor(std::log10(ai_lo)) - 1, x1 = std::ceil(std::log10(ai_hi)) + 1;
  const double y0 = std::floor(std::log10(perf_lo)) - 1, y1 = std::ceil(std::log10(perf_hi)) + 1;

  auto px = [&](double ai) {
    return kLeft + (std::log10(ai) - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double perf) {
    const double clamped = std::max(perf, std::pow(10.0, y0));
    return kHeight - kBottom - (std::log10(clamped) - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, kHeight);
  svg += fmt::format("<title>Roofline: {}</title>\n", m.display_label());
  svg += fmt::format(
      "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
      "stroke=\"#888\"/>\n",
      kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom);
  for (double d = x0; d <= x1; d += 1) {
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">1e{:.0f}</text>\n",
                       px(std::pow(10.0, d)), kHeight - kBottom + 16, d);
  }
  for (double d = y0; d <= y1; d += 1) {
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">1e{:.0f}</text>\n",
                       kLeft - 6, py(std::pow(10.0, d)) + 4, d);
  }
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">OP/Byte</text>\n"
      "<text x=\"14\" y=\"{:.1f}\" transform=\"rotate(-90 14 {:.1f})\" "
      "text-anchor=\"middle\">TFLOP/s</text>\n",
      (kLeft + kWidth - kRight) / 2, kHeight - 12, (kTop + kHeight - kBottom) / 2,
      (kTop + kHeight - kBottom) / 2);

  const double ai_start = std::pow(10.0, x0), ai_end = std::pow(10.0, x1);
  svg += fmt::format(
      "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" "
      "points=\"{:.1f},{:.1f} {:.1f},{:.1f} {:.1f},{:.1f}\"/>\n",
      px(ai_start), py(ai_start * m.peak_bw_tbs()), px(ridge), py(peak), px(ai_end), py(peak));
  svg += fmt::format(
      "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"blue\" "
      "stroke-dasharray=\"4 3\"/>\n",
      px(ridge), py(std::pow(10.0, y0)), px(ridge), py(peak));
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" fill=\"blue\">{} (peak {} TFLOP/s, {} GB/s, ridge {})</text>\n",
      kLeft + 6, kTop + 14, m.display_label(), format_fixed4(peak),
      fmt::format("{:g}", m.peak_bw_gbs), format_fixed4(ridge));
  for (const auto& p : report.points) {
    const char* fill = p.bound == perf::Bound::memory ? "#d62728" : "#2ca02c";
    svg += fmt::format(
        "<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"{}\" stroke=\"black\">"
        "<title>{}: ai={} perf={} ({})</title></circle>\n",
        px(p.ai), py(p.perf_tflops), fill, p.kernel, format_fixed4(p.ai),
        format_fixed4(p.perf_tflops), perf::to_string(p.bound));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

std::string emit_report(const EstimateTable& table, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: {
      std::string out = "size,config,bandwidth_gibs,time_s,bottleneck\n";
      for (std::size_t i = 0; i < table.sizes.size(); ++i) {
        for (std::size_t j = 0; j < table.configs.size(); ++j) {
          const auto& cell = table.cells[i][j];
          out += fmt::format("{},{},{:g},{},{}\n", table.sizes[i], table.configs[j].name,
                             table.configs[j].aggregate_bw_gib(), format_seconds(cell.time_s),
                             nmc::to_string(cell.bottleneck));
        }
      }
      return out;
    }
    case ReportFormat::table: {
      std::vector<std::vector<std::string>> rows;
      rows.push_back({"Size"});
      rows.push_back({""});
      for (const auto& cfg : table.configs) {
        rows[0].push_back(cfg.display_label());
        rows[1].push_back(fmt::format("{:g} GB/s", cfg.aggregate_bw_gib()));
      }
      for (std::size_t i = 0; i < table.sizes.size(); ++i) {
        std::vector<std::string> row{size_label(table.sizes[i])};
        for (const auto& cell : table.cells[i]) row.push_back(format_seconds(cell.time_s) + " s");
        rows.push_back(std::move(row));
      }
      return render_table(rows);
    }
    case ReportFormat::svg:
      break;
  }
  throw ValidationError("format", "the estimate table has no SVG rendering");
}

std::string emit_report(const RooflineReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: {
      std::string out = "kernel,ai,perf_tflops,bound\n";
      for (const auto& p : report.points) {
        out += fmt::format("{},{},{},{}\n", p.kernel, format_fixed4(p.ai),
                           format_fixed4(p.perf_tflops), perf::to_string(p.bound));
      }
      return out;
    }
    case ReportFormat::table: {
      const auto& m = report.machine;
      std::string out = fmt::format("{}: peak {} TFLOP/s, bandwidth {:g} GB/s, ridge {} flop/byte\n",
                                    m.display_label(), format_fixed4(m.peak_tflops()),
                                    m.peak_bw_gbs, format_fixed4(m.ridge_ai()));
      std::vector<std::vector<std::string>> rows{{"kernel", "ai", "perf_tflops", "ceiling", "bound"}};
      for (const auto& p : report.points) {
        rows.push_back({p.kernel, format_fixed4(p.ai), format_fixed4(p.perf_tflops),
                        format_fixed4(p.ceiling_tflops), std::string(perf::to_string(p.bound))});
      }
      return out + render_table(rows);
    }
    case ReportFormat::svg:
      return render_roofline_svg(report);
  }
  throw ValidationError("format", "unsupported format");
}

std::string emit_report(const CpiReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: {
      std::string out = "kernel,counter,percent\n";
      for (const auto& row : report.rows) {
        for (const auto& e : row.entries) {
          if (e.counter == perf::Counter::run_cyc) continue;
          out += fmt::format("{},{},{:.2f}\n", row.kernel, perf::counter_name(e.counter), e.percent);
        }
      }
      return out;
    }
    case ReportFormat::table: {
      static constexpr perf::Counter kColumns[] = {
          perf::Counter::one_plus_ppc_cmpl, perf::Counter::cmplu_stall,
          perf::Counter::cmplu_stall_lsu, perf::Counter::cmplu_stall_exec_unit};
      std::vector<std::vector<std::string>> rows{{"kernel"}};
      for (auto c : kColumns) rows[0].emplace_back(perf::counter_name(c));
      rows[0].emplace_back("class");
      for (std::size_t i = 0; i < report.rows.size(); ++i) {
        std::vector<std::string> row{report.rows[i].kernel};
        for (auto c : kColumns) row.push_back(fmt::format("{:.0f}", report.rows[i].percent(c)));
        row.emplace_back(perf::to_string(report.classes[i]));
        rows.push_back(std::move(row));
      }
      return render_table(rows);
    }
    case ReportFormat::svg:
      break;
  }
  throw ValidationError("format", "the CPI report has no SVG rendering");
}

}  // namespace nmfft::io
