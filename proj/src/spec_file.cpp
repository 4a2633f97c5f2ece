#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "default_spec.hpp"
#include "nmfft/errors.hpp"
#include "nmfft/ingest.hpp"

namespace nmfft::io {

using json = nlohmann::json;

namespace {

// Typed accessors over one JSON object that remember its path and reject
// keys nobody asked about.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ValidationError(path_, "expected an object");
  }

  std::string field_path(std::string_view key) const { return path_ + "." + std::string(key); }

  std::optional<std::string> opt_string(std::string_view key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ValidationError(field_path(key), "expected a string");
    return v->get<std::string>();
  }

  std::string req_string(std::string_view key) {
    auto v = opt_string(key);
    if (!v) throw ValidationError(field_path(key), "missing");
    if (v->empty()) throw ValidationError(field_path(key), "must not be empty");
    return *v;
  }

  std::optional<double> opt_positive(std::string_view key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ValidationError(field_path(key), "expected a number");
    const double d = v->get<double>();
    if (!(d > 0.0) || !std::isfinite(d)) throw ValidationError(field_path(key), "must be positive");
    return d;
  }

  double req_positive(std::string_view key) {
    auto v = opt_positive(key);
    if (!v) throw ValidationError(field_path(key), "missing");
    return *v;
  }

  std::optional<unsigned> opt_count(std::string_view key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer() || v->get<std::int64_t>() <= 0 ||
        v->get<std::int64_t>() > std::numeric_limits<unsigned>::max()) {
      throw ValidationError(field_path(key), "expected a positive integer");
    }
    return static_cast<unsigned>(v->get<std::int64_t>());
  }

  unsigned req_count(std::string_view key) {
    auto v = opt_count(key);
    if (!v) throw ValidationError(field_path(key), "missing");
    return *v;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!consumed_.contains(key)) throw ValidationError(field_path(key), "unknown key");
    }
  }

 private:
  const json* find(std::string_view key) {
    consumed_.emplace(key);
    const auto it = obj_.find(std::string(key));
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string, std::less<>> consumed_;
};

perf::MachineSpec read_machine(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  perf::MachineSpec m;
  m.name = r.req_string("name");
  m.label = r.opt_string("label").value_or("");
  m.peak_tflops_override = r.opt_positive("peak_tflops");
  m.freq_ghz = r.opt_positive("freq_ghz");
  m.ops_per_core = r.opt_positive("ops_per_core");
  m.cores = r.opt_count("cores");
  m.sockets = r.opt_count("sockets");
  m.peak_bw_gbs = r.req_positive("peak_bw_gbs");
  m.nmc_config = r.opt_string("nmc_config");
  r.reject_unknown();

  if (!m.peak_tflops_override) {
    for (std::string_view key : {"freq_ghz", "ops_per_core", "cores", "sockets"}) {
      const bool present = (key == "freq_ghz" && m.freq_ghz) ||
                           (key == "ops_per_core" && m.ops_per_core) ||
                           (key == "cores" && m.cores) || (key == "sockets" && m.sockets);
      if (!present) {
        throw ValidationError(r.field_path(key),
                              "missing (required when peak_tflops is not given)");
      }
    }
  }
  return m;
}

nmc::NmcConfig read_nmc_config(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  nmc::NmcConfig c;
  c.name = r.req_string("name");
  c.label = r.opt_string("label").value_or("");
  const auto kind = r.req_string("memory_kind");
  try {
    c.memory_kind = nmc::parse_memory_kind(kind);
  } catch (const ValidationError& e) {
    throw ValidationError(r.field_path("memory_kind"), "unknown memory kind '" + kind + "'");
  }
  c.channels = r.req_count("channels");
  c.bw_per_channel_gib = r.req_positive("bw_per_channel_gibs");
  c.access_width_bytes = r.opt_count("access_width_bytes").value_or(32);
  c.accelerators = r.req_count("accelerators");
  c.accel_flops = r.opt_positive("accel_gflops").value_or(10.0) * 1e9;
  r.reject_unknown();
  return c;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

}  // namespace

const perf::MachineSpec& SpecFile::machine(std::string_view name) const {
  for (const auto& m : machines) {
    if (m.name == name) return m;
  }
  throw ValidationError(std::string(name), "no such machine in spec");
}

const nmc::NmcConfig& SpecFile::nmc_config(std::string_view name) const {
  for (const auto& c : nmc_configs) {
    if (c.name == name) return c;
  }
  throw ValidationError(std::string(name), "no such NMC config in spec");
}

SpecFile parse_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a 1-based byte position.
    throw ParseError(line_of_offset(json_text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
  if (!doc.is_object()) throw ValidationError("$", "expected an object");

  SpecFile spec;
  for (const auto& [key, value] : doc.items()) {
    if (key != "machines" && key != "nmc_configs") throw ValidationError(key, "unknown key");
  }
  if (doc.contains("machines")) {
    const auto& arr = doc["machines"];
    if (!arr.is_array()) throw ValidationError("machines", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      spec.machines.push_back(read_machine(arr[i], "machines[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("nmc_configs")) {
    const auto& arr = doc["nmc_configs"];
    if (!arr.is_array()) throw ValidationError("nmc_configs", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      spec.nmc_configs.push_back(read_nmc_config(arr[i], "nmc_configs[" + std::to_string(i) + "]"));
    }
  }

  std::set<std::string> seen;
  for (std::size_t i = 0; i < spec.machines.size(); ++i) {
    if (!seen.insert(spec.machines[i].name).second) {
      throw ValidationError("machines[" + std::to_string(i) + "].name",
                            "duplicate machine name '" + spec.machines[i].name + "'");
    }
  }
  seen.clear();
  for (std::size_t i = 0; i < spec.nmc_configs.size(); ++i) {
    if (!seen.insert(spec.nmc_configs[i].name).second) {
      throw ValidationError("nmc_configs[" + std::to_string(i) + "].name",
                            "duplicate config name '" + spec.nmc_configs[i].name + "'");
    }
  }
  for (std::size_t i = 0; i < spec.machines.size(); ++i) {
    const auto& ref = spec.machines[i].nmc_config;
    if (ref && !seen.contains(*ref)) {
      throw ValidationError("machines[" + std::to_string(i) + "].nmc_config",
                            "refers to unknown config '" + *ref + "'");
    }
  }
  return spec;
}

SpecFile load_spec(const std::filesystem::path& path) {
  return parse_spec(read_text_file(path));
}

std::string_view default_spec_text() noexcept { return detail::kDefaultSpecJson; }

const SpecFile& default_spec() {
  static const SpecFile spec = parse_spec(default_spec_text());
  return spec;
}

}  // namespace nmfft::io
