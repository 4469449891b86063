#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fogcache/caching.hpp"
#include "fogcache/demand.hpp"
#include "fogcache/generator.hpp"

namespace fogcache {

enum class SweepVariable { kNone, kP, kQ };

std::string_view to_string(SweepVariable v);

// Grid used when a p or q sweep names no values.
inline const std::vector<double> kDefaultSweepGrid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};

struct TraceSource {
  // Trace CSV to load; when absent the generator synthesises one.
  std::optional<std::filesystem::path> path;
  double scale = 100.0;
  GeneratorConfig generator = GeneratorConfig::defaults(100.0);
};

struct ExperimentConfig {
  TraceSource trace;
  std::vector<std::string> operators;  // empty: every operator in the trace
  std::size_t ring_size = 10;
  std::size_t pod_fanout = 10;
  double target_hit_ratio = 0.8;
  SweepVariable sweep = SweepVariable::kNone;
  std::vector<double> grid;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  DemandPolicyConfig demand;
  DistanceWeighting distance_weighting = DistanceWeighting::kPerRequest;
  std::optional<std::filesystem::path> category_rules;
  // Worker threads for operator x sweep-point cells; 0 = hardware threads.
  int threads = 1;

  // Throws ConfigError on the first violated invariant.
  void validate() const;

  // Sweep grid actually evaluated: {0} for kNone.
  std::vector<double> effective_grid() const;
};

// Parses the JSON config document. Missing keys take defaults; unknown keys
// are rejected. `generator` fields are applied on top of
// GeneratorConfig::defaults(trace.scale). The top-level seed drives both the
// generator and the demand policies. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

// Applies `key.path=value` to the document. The value is parsed as JSON when
// possible, otherwise taken as a string. Throws ConfigError.
void apply_override(nlohmann::json& doc, std::string_view assignment);

// Reads a config file (or `{}` when path is empty), applies overrides, parses.
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides);

}  // namespace fogcache
