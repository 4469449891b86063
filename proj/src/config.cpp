#include "fogcache/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace fogcache {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kNone: return "none";
    case SweepVariable::kP: return "p";
    case SweepVariable::kQ: return "q";
  }
  return "none";
}

namespace {

// Reads fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(fmt::format("{}: expected a JSON object", where()));
  }

  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) {
        throw ConfigError(fmt::format("{}: unknown key '{}'", where(), key));
      }
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(fmt::format("{}.{}: wrong type", where(), key));
    }
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

GeoPoint point_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(where + ": expected [lat, lon]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void read_generator(const json& j, GeneratorConfig& g, const std::string& path) {
  ObjectReader r(j, path);
  r.get("n_users", g.n_users);
  r.get("n_hours", g.n_hours);
  if (r.has("start_day")) {
    auto d = parse_day(r.at("start_day").is_string() ? r.at("start_day").get<std::string>() : "");
    if (!d) throw ConfigError(path + ".start_day: expected YYYY-MM-DD");
    g.start_day = *d;
  }
  if (r.has("operators")) {
    g.operators.clear();
    const auto& ops = r.at("operators");
    if (!ops.is_array()) throw ConfigError(path + ".operators: expected an array");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      ObjectReader o(ops[i], fmt::format("{}.operators[{}]", path, i));
      OperatorDeployment d;
      o.get("name", d.name);
      o.get("cells", d.cells);
      o.get("user_weight", d.user_weight);
      g.operators.push_back(std::move(d));
    }
  }
  r.get("static_fraction", g.static_fraction);
  r.get("gps_jitter_m", g.gps_jitter_m);
  r.get("active_probability", g.active_probability);
  r.get("vehicular_base", g.vehicular_base);
  r.get("peak_hours", g.peak_hours);
  r.get("peak_amplitudes", g.peak_amplitudes);
  r.get("peak_width_hours", g.peak_width_hours);
  r.get("cellular_probability_vehicular", g.cellular_probability_vehicular);
  r.get("cellular_probability_other", g.cellular_probability_other);
  r.get("lte_share", g.lte_share);
  if (r.has("category_shares")) {
    ObjectReader s(r.at("category_shares"), path + ".category_shares");
    for (auto c : kAllCategories) s.get(std::string(to_string(c)), g.category_shares[index_of(c)]);
  }
  r.get("max_apps_per_hour", g.max_apps_per_hour);
  r.get("session_bytes_median", g.session_bytes_median);
  r.get("session_bytes_sigma", g.session_bytes_sigma);
  r.get("upload_ratio", g.upload_ratio);
  if (r.has("bbox")) {
    ObjectReader b(r.at("bbox"), path + ".bbox");
    if (b.has("south_west")) g.bbox.south_west = point_from(b.at("south_west"), path + ".bbox.south_west");
    if (b.has("north_east")) g.bbox.north_east = point_from(b.at("north_east"), path + ".bbox.north_east");
  }
}

ordered_json generator_to_json(const GeneratorConfig& g) {
  ordered_json j;
  j["n_users"] = g.n_users;
  j["n_hours"] = g.n_hours;
  j["start_day"] = format_day(g.start_day);
  auto ops = ordered_json::array();
  for (const auto& o : g.operators) {
    ops.push_back({{"name", o.name}, {"cells", o.cells}, {"user_weight", o.user_weight}});
  }
  j["operators"] = ops;
  j["static_fraction"] = g.static_fraction;
  j["gps_jitter_m"] = g.gps_jitter_m;
  j["active_probability"] = g.active_probability;
  j["vehicular_base"] = g.vehicular_base;
  j["peak_hours"] = g.peak_hours;
  j["peak_amplitudes"] = g.peak_amplitudes;
  j["peak_width_hours"] = g.peak_width_hours;
  j["cellular_probability_vehicular"] = g.cellular_probability_vehicular;
  j["cellular_probability_other"] = g.cellular_probability_other;
  j["lte_share"] = g.lte_share;
  ordered_json shares;
  for (auto c : kAllCategories) shares[std::string(to_string(c))] = g.category_shares[index_of(c)];
  j["category_shares"] = shares;
  j["max_apps_per_hour"] = g.max_apps_per_hour;
  j["session_bytes_median"] = g.session_bytes_median;
  j["session_bytes_sigma"] = g.session_bytes_sigma;
  j["upload_ratio"] = g.upload_ratio;
  j["bbox"] = {{"south_west", {g.bbox.south_west.lat, g.bbox.south_west.lon}},
               {"north_east", {g.bbox.north_east.lat, g.bbox.north_east.lon}}};
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!trace.path) trace.generator.validate();
  demand.validate();
  if (ring_size < 1) throw ConfigError("ring_size must be >= 1");
  if (pod_fanout < 1) throw ConfigError("pod_fanout must be >= 1");
  if (!(target_hit_ratio > 0.0 && target_hit_ratio <= 1.0)) {
    throw ConfigError("target_hit_ratio must be in (0, 1]");
  }
  if (sweep != SweepVariable::kNone) {
    if (grid.empty()) throw ConfigError("sweep grid must not be empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw ConfigError("sweep grid values must be in [0, 1]");
      if (i > 0 && !(grid[i] > grid[i - 1])) {
        throw ConfigError("sweep grid must be strictly increasing");
      }
    }
  }
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::vector<double> ExperimentConfig::effective_grid() const {
  if (sweep == SweepVariable::kNone) return {0.0};
  return grid;
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig cfg;
  try {
    ObjectReader r(doc, "");
    r.get("seed", cfg.seed);
    if (r.has("trace")) {
      ObjectReader t(r.at("trace"), "trace");
      if (t.has("path")) cfg.trace.path = t.at("path").get<std::string>();
      t.get("scale", cfg.trace.scale);
      if (!(cfg.trace.scale > 0.0)) throw ConfigError("trace.scale must be > 0");
      cfg.trace.generator = GeneratorConfig::defaults(cfg.trace.scale);
      if (t.has("generator")) read_generator(t.at("generator"), cfg.trace.generator, "trace.generator");
    }
    r.get("operators", cfg.operators);
    r.get("ring_size", cfg.ring_size);
    r.get("pod_fanout", cfg.pod_fanout);
    r.get("target_hit_ratio", cfg.target_hit_ratio);
    if (r.has("sweep")) {
      ObjectReader s(r.at("sweep"), "sweep");
      std::string var = "none";
      s.get("variable", var);
      if (var == "none") {
        cfg.sweep = SweepVariable::kNone;
      } else if (var == "p") {
        cfg.sweep = SweepVariable::kP;
      } else if (var == "q") {
        cfg.sweep = SweepVariable::kQ;
      } else {
        throw ConfigError("sweep.variable must be one of none, p, q");
      }
      if (s.has("values")) {
        s.get("values", cfg.grid);
      } else if (cfg.sweep != SweepVariable::kNone) {
        cfg.grid = kDefaultSweepGrid;
      }
    }
    if (r.has("output_dir")) cfg.output_dir = r.at("output_dir").get<std::string>();
    if (r.has("demand")) {
      ObjectReader d(r.at("demand"), "demand");
      d.get("popular_catalog_size", cfg.demand.popular_catalog_size);
      d.get("local_catalog_size", cfg.demand.local_catalog_size);
      d.get("popular_hit_probability", cfg.demand.popular_hit_probability);
      d.get("ondemand_catalog_size", cfg.demand.ondemand_catalog_size);
      d.get("zipf_exponent", cfg.demand.zipf_exponent);
      d.get("recommendation_top_fraction", cfg.demand.recommendation_top_fraction);
      d.get("locality_items_per_cell", cfg.demand.locality_items_per_cell);
      if (d.has("top_selection")) {
        const auto sel = d.at("top_selection").get<std::string>();
        if (sel == "popularity") {
          cfg.demand.top_selection = TopSelection::kPopularity;
        } else if (sel == "uniform") {
          cfg.demand.top_selection = TopSelection::kUniform;
        } else {
          throw ConfigError("demand.top_selection must be popularity or uniform");
        }
      }
    }
    if (r.has("distance_weighting")) {
      const auto w = r.at("distance_weighting").get<std::string>();
      if (w == "per_request") {
        cfg.distance_weighting = DistanceWeighting::kPerRequest;
      } else if (w == "per_item") {
        cfg.distance_weighting = DistanceWeighting::kPerItem;
      } else {
        throw ConfigError("distance_weighting must be per_request or per_item");
      }
    }
    if (r.has("category_rules")) cfg.category_rules = r.at("category_rules").get<std::string>();
    r.get("threads", cfg.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.trace.generator.seed = cfg.seed;
  cfg.demand.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["seed"] = cfg.seed;
  ordered_json trace;
  if (cfg.trace.path) {
    trace["path"] = cfg.trace.path->string();
  } else {
    trace["scale"] = cfg.trace.scale;
    trace["generator"] = generator_to_json(cfg.trace.generator);
  }
  j["trace"] = trace;
  j["operators"] = cfg.operators;
  j["ring_size"] = cfg.ring_size;
  j["pod_fanout"] = cfg.pod_fanout;
  j["target_hit_ratio"] = cfg.target_hit_ratio;
  j["sweep"] = {{"variable", std::string(to_string(cfg.sweep))}, {"values", cfg.grid}};
  j["output_dir"] = cfg.output_dir.string();
  j["demand"] = {
      {"popular_catalog_size", cfg.demand.popular_catalog_size},
      {"local_catalog_size", cfg.demand.local_catalog_size},
      {"popular_hit_probability", cfg.demand.popular_hit_probability},
      {"ondemand_catalog_size", cfg.demand.ondemand_catalog_size},
      {"zipf_exponent", cfg.demand.zipf_exponent},
      {"recommendation_top_fraction", cfg.demand.recommendation_top_fraction},
      {"locality_items_per_cell", cfg.demand.locality_items_per_cell},
      {"top_selection",
       cfg.demand.top_selection == TopSelection::kPopularity ? "popularity" : "uniform"},
  };
  j["distance_weighting"] =
      cfg.distance_weighting == DistanceWeighting::kPerRequest ? "per_request" : "per_item";
  if (cfg.category_rules) j["category_rules"] = cfg.category_rules->string();
  j["threads"] = cfg.threads;
  return j;
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(fmt::format("--set expects key=value, got '{}'", assignment));
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const auto part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(fmt::format("--set: malformed key '{}'", key));
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError(fmt::format("--set: '{}' crosses a non-object", key));
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    doc = json::parse(ss.str(), nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config file " + path.string() + " is not valid JSON");
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

}  // namespace fogcache
