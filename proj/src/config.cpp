#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "optrec/experiment.hpp"
#include "optrec/io.hpp"

namespace optrec {

using nlohmann::json;

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Envelope: return "envelope";
    case Mode::EstimateMax: return "estimate-max";
    case Mode::EstimateFn: return "estimate-fn";
    case Mode::Design: return "design";
    case Mode::Bounds: return "bounds";
    case Mode::Verify: return "verify";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::Envelope, Mode::EstimateMax, Mode::EstimateFn, Mode::Design, Mode::Bounds, Mode::Verify}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown mode '" + std::string(name) +
                    "' (expected envelope, estimate-max, estimate-fn, design, bounds or verify)");
}

std::string_view to_string(Format format) { return format == Format::Csv ? "csv" : "json"; }

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

Format ExperimentConfig::output_format() const {
  if (format) return *format;
  switch (mode) {
    case Mode::Envelope:
    case Mode::EstimateFn:
    case Mode::Design:
    case Mode::Verify: return Format::Csv;
    default: return Format::Json;
  }
}

Eigen::Index ExperimentConfig::grid_for(Eigen::Index dim) const {
  if (grid > 0) return grid;
  switch (dim) {
    case 1: return 10000;
    case 2: return 300;
    case 3: return 40;
    default: return 10;
  }
}

SampleSet<> inline_samples(const PointSet<>& x, const Vector<>& y, const Vector<>& eps, double alpha, Metric metric) {
  return SampleSet<>(x, y, eps, alpha, Domain(metric, x.rows()));
}

namespace {

double number_of(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_number(v.get<std::string>());
    } catch (const ArgumentError&) {
    }
  }
  throw ConfigError("'" + key + "' must be a number");
}

template <typename Int>
Int integer_of(const json& v, const std::string& key, Int min_value) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError("'" + key + "' must be an integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u < std::uint64_t(std::max<Int>(min_value, 0))) throw ConfigError("'" + key + "' is too small");
    return Int(u);
  }
  const auto i = v.get<std::int64_t>();
  if (i < std::int64_t(min_value)) throw ConfigError("'" + key + "' must be at least " + std::to_string(min_value));
  return Int(i);
}

std::vector<double> numbers_of(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("'" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(number_of(e, key));
  return out;
}

SampleSet<> samples_from_json(const json& j, double alpha, Metric metric) {
  if (!j.is_object()) throw ConfigError("'samples' must be an object with sites, values and eps");
  for (const auto& [key, _] : j.items()) {
    if (key != "sites" && key != "values" && key != "eps") throw ConfigError("unknown key 'samples." + key + "'");
  }
  if (!j.contains("sites") || !j.contains("values")) throw ConfigError("'samples' needs 'sites' and 'values'");
  const auto& sites = j.at("sites");
  if (!sites.is_array() || sites.empty()) throw ConfigError("'samples.sites' must be a nonempty array");
  const auto M = Eigen::Index(sites.size());
  const Eigen::Index d = sites[0].is_array() ? Eigen::Index(sites[0].size()) : 1;
  if (d < 1) throw ConfigError("'samples.sites' entries must be nonempty");
  PointSet<> x(d, M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const auto& site = sites[std::size_t(m)];
    if (site.is_array()) {
      if (Eigen::Index(site.size()) != d) throw ConfigError("'samples.sites' entries must share one dimension");
      for (Eigen::Index i = 0; i < d; ++i) x(i, m) = number_of(site[std::size_t(i)], "samples.sites");
    } else {
      if (d != 1) throw ConfigError("'samples.sites' entries must share one dimension");
      x(0, m) = number_of(site, "samples.sites");
    }
  }
  const auto values = numbers_of(j.at("values"), "samples.values");
  if (Eigen::Index(values.size()) != M) throw ConfigError("'samples.values' must have one entry per site");
  Vector<> e = Vector<>::Zero(M);
  if (j.contains("eps")) {
    const auto& ej = j.at("eps");
    if (ej.is_array()) {
      const auto eps = numbers_of(ej, "samples.eps");
      if (Eigen::Index(eps.size()) != M) throw ConfigError("'samples.eps' must be a number or one entry per site");
      e = Eigen::Map<const Vector<>>(eps.data(), M);
    } else {
      e.setConstant(number_of(ej, "samples.eps"));
    }
  }
  return inline_samples(x, Eigen::Map<const Vector<>>(values.data(), M), e, alpha, metric);
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"mode", "samples", "samples_file", "alpha", "metric", "grid", "p",
                                              "trials", "seed", "out", "format", "design", "delta", "quad_tol"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("mode")) {
      if (!j["mode"].is_string()) throw ConfigError("'mode' must be a string");
      cfg.mode = parse_mode(j["mode"].get<std::string>());
    }
    if (j.contains("alpha")) cfg.alpha = number_of(j["alpha"], "alpha");
    if (j.contains("metric")) {
      if (!j["metric"].is_string()) throw ConfigError("'metric' must be a string");
      cfg.metric = parse_metric(j["metric"].get<std::string>());
    }
    if (j.contains("grid")) cfg.grid = integer_of<Eigen::Index>(j["grid"], "grid", 1);
    if (j.contains("p")) cfg.p = number_of(j["p"], "p");
    if (j.contains("trials")) cfg.trials = integer_of<std::size_t>(j["trials"], "trials", 1);
    if (j.contains("seed")) cfg.seed = integer_of<std::uint64_t>(j["seed"], "seed", 0);
    if (j.contains("out")) {
      if (!j["out"].is_string()) throw ConfigError("'out' must be a string");
      cfg.out = j["out"].get<std::string>();
    }
    if (j.contains("format")) {
      if (!j["format"].is_string()) throw ConfigError("'format' must be a string");
      cfg.format = parse_format(j["format"].get<std::string>());
    }
    if (j.contains("delta")) cfg.delta = number_of(j["delta"], "delta");
    if (j.contains("quad_tol")) cfg.quad_tol = number_of(j["quad_tol"], "quad_tol");
    if (j.contains("design")) {
      const auto& dj = j["design"];
      if (!dj.is_object()) throw ConfigError("'design' must be an object");
      for (const auto& [key, _] : dj.items()) {
        if (key != "d" && key != "N" && key != "eps") throw ConfigError("unknown key 'design." + key + "'");
      }
      auto index_list = [&](const char* key) {
        std::vector<Eigen::Index> out;
        if (!dj[key].is_array() || dj[key].empty()) {
          throw ConfigError(std::string("'design.") + key + "' must be a nonempty array");
        }
        for (const auto& v : dj[key]) out.push_back(integer_of<Eigen::Index>(v, std::string("design.") + key, 1));
        return out;
      };
      if (dj.contains("d")) cfg.design.d_list = index_list("d");
      if (dj.contains("N")) cfg.design.N_list = index_list("N");
      if (dj.contains("eps")) cfg.design.eps = number_of(dj["eps"], "design.eps");
    }
    if (j.contains("samples") && j.contains("samples_file")) {
      throw ConfigError("give either 'samples' or 'samples_file', not both");
    }
    if (j.contains("samples")) cfg.samples = samples_from_json(j["samples"], cfg.alpha, cfg.metric);
    if (j.contains("samples_file")) {
      if (!j["samples_file"].is_string()) throw ConfigError("'samples_file' must be a string");
      std::filesystem::path path = j["samples_file"].get<std::string>();
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      if (!std::filesystem::exists(path)) throw ConfigError("samples_file '" + path.string() + "' does not exist");
      cfg.samples = read_samples_csv_file(path.string(), cfg.alpha, cfg.metric);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), parent.empty() ? "." : parent.string());
}

}  // namespace optrec
