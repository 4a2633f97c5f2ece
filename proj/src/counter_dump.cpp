#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "nmfft/errors.hpp"
#include "nmfft/ingest.hpp"

namespace nmfft::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

// Calls fn(line_no, fields) for every data row after checking the header.
template <typename Fn>
void for_each_row(std::string_view text, std::span<const std::string_view> header,
                  std::size_t optional_trailing, Fn&& fn) {
  std::size_t line_no = 0;
  bool seen_header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    auto fields = split_fields(line);
    if (!seen_header) {
      const bool ok = fields.size() >= header.size() &&
                      fields.size() <= header.size() + optional_trailing &&
                      std::equal(header.begin(), header.end(), fields.begin());
      if (!ok) {
        std::string expected;
        for (auto h : header) expected += (expected.empty() ? "" : ",") + std::string(h);
        throw ParseError(line_no, "expected header '" + expected + "'");
      }
      seen_header = true;
    } else {
      if (fields.size() < header.size() || fields.size() > header.size() + optional_trailing) {
        throw ParseError(line_no, fmt::format("expected {} fields, got {}", header.size(),
                                              fields.size()));
      }
      fn(line_no, fields);
    }
    if (end == text.size()) break;
  }
}

double parse_double_field(std::string_view s, std::size_t line_no, std::string_view what) {
  double value = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(line_no, fmt::format("{} '{}' is not a number", what, s));
  }
  return value;
}

}  // namespace

std::vector<perf::PmuSample> parse_counter_dump(std::string_view text) {
  static constexpr std::string_view kHeader[] = {"kernel", "counter", "value"};
  std::vector<perf::PmuSample> samples;
  std::map<std::string, std::size_t, std::less<>> index;
  std::map<std::string, std::size_t, std::less<>> first_line;

  for_each_row(text, kHeader, 0, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
    const auto kernel = f[0];
    if (kernel.empty()) throw ParseError(line_no, "empty kernel label");
    const auto counter = perf::parse_counter(f[1]);
    if (!counter) throw ParseError(line_no, fmt::format("unknown counter '{}'", f[1]));

    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), value);
    if (f[2].empty() || ec != std::errc() || ptr != f[2].data() + f[2].size()) {
      throw ParseError(line_no, fmt::format("value '{}' is not a non-negative integer", f[2]));
    }

    auto it = index.find(kernel);
    if (it == index.end()) {
      it = index.emplace(std::string(kernel), samples.size()).first;
      first_line.emplace(std::string(kernel), line_no);
      samples.push_back(perf::PmuSample{std::string(kernel), {}});
    }
    auto& sample = samples[it->second];
    if (!sample.counters.emplace(*counter, value).second) {
      throw ParseError(line_no, fmt::format("duplicate {} for kernel '{}'", f[1], kernel));
    }
  });

  for (const auto& s : samples) {
    try {
      s.validate();
    } catch (const ValidationError& e) {
      throw ParseError(first_line.find(s.kernel)->second, e.what());
    }
  }
  return samples;
}

std::vector<perf::PmuSample> load_counter_dump(const std::filesystem::path& path) {
  return parse_counter_dump(read_text_file(path));
}

std::string write_counter_dump(std::span<const perf::PmuSample> samples) {
  std::string out = "kernel,counter,value\n";
  for (const auto& s : samples) {
    for (perf::Counter c : perf::kAllCounters) {
      const auto it = s.counters.find(c);
      if (it == s.counters.end()) continue;
      out += fmt::format("{},{},{}\n", s.kernel, perf::counter_name(c), it->second);
    }
  }
  return out;
}

std::vector<PointRecord> parse_roofline_points(std::string_view text) {
  static constexpr std::string_view kHeader[] = {"kernel", "ai", "perf_tflops"};
  std::vector<PointRecord> points;
  for_each_row(text, kHeader, 1, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
    if (f[0].empty()) throw ParseError(line_no, "empty kernel label");
    PointRecord p;
    p.kernel = std::string(f[0]);
    p.ai = parse_double_field(f[1], line_no, "ai");
    p.perf_tflops = parse_double_field(f[2], line_no, "perf_tflops");
    if (!(p.ai > 0.0)) throw ParseError(line_no, "ai must be positive");
    if (p.perf_tflops < 0.0) throw ParseError(line_no, "perf_tflops must be non-negative");
    points.push_back(std::move(p));
  });
  return points;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nmfft::io
