#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fogcache/geo.hpp"
#include "fogcache/mobility.hpp"
#include "fogcache/trace.hpp"

namespace fogcache {

// Cell and user counts of the reference deployment the defaults scale down.
struct ReferenceOperator {
  const char* name;
  int cells;
};
inline constexpr std::array<ReferenceOperator, 4> kReferenceOperators = {{
    {"AT&T", 16992},
    {"Sprint", 2764},
    {"T-Mobile", 24290},
    {"Verizon", 3882},
}};
inline constexpr int kReferenceUsers = 64386;

struct OperatorDeployment {
  std::string name;
  int cells = 1;
  // Share of users subscribed to this operator (normalised over operators).
  double user_weight = 1.0;
};

struct BoundingBox {
  GeoPoint south_west{33.70, -118.67};
  GeoPoint north_east{34.34, -117.65};

  bool contains(const GeoPoint& p) const;
};

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int n_users = 644;
  int n_hours = 168;
  Day start_day{std::chrono::year(2015), std::chrono::October, std::chrono::day(1)};
  std::vector<OperatorDeployment> operators;

  // Probability that a user never moves (one jittered fix per hour).
  double static_fraction = 0.4;
  double gps_jitter_m = 50.0;

  // Probability that a user emits records in a given hour.
  double active_probability = 0.5;

  // Non-static users are vehicular in hour h with probability
  // base + sum_i amplitude_i * exp(-d(h, peak_i)^2 / (2 width^2)), where d is
  // the circular hour-of-day distance; pedestrian otherwise.
  double vehicular_base = 0.08;
  std::array<int, 2> peak_hours{8, 17};
  std::array<double, 2> peak_amplitudes{0.45, 0.5};
  double peak_width_hours = 1.5;

  // Probability that a user-hour is on the cellular network, by class.
  double cellular_probability_vehicular = 0.7;
  double cellular_probability_other = 0.11;
  double lte_share = 0.8;

  // Traffic share by category, indexed by ContentCategory.
  std::array<double, kNumCategories> category_shares{0.34, 0.24, 0.18, 0.04, 0.03,
                                                     0.06, 0.04, 0.03, 0.04};
  // App sessions per active hour, drawn uniformly in [1, max_apps_per_hour].
  int max_apps_per_hour = 3;
  // Session volume is lognormal with this median (bytes) and log-sd.
  double session_bytes_median = 2.0e6;
  double session_bytes_sigma = 1.0;
  double upload_ratio = 0.1;

  BoundingBox bbox;

  // Reference magnitudes divided by `scale`.
  static GeneratorConfig defaults(double scale = 100.0);

  // Throws ConfigError on the first violated invariant.
  void validate() const;
};

// A generated operator deployment (cell sites) shared by trace synthesis and
// tests that check cell assignment.
struct GeneratedCell {
  std::string cell_id;
  GeoPoint position;
};

std::vector<GeneratedCell> generate_deployment(const GeneratorConfig& cfg,
                                               const OperatorDeployment& op,
                                               std::size_t op_index);

// Apps emitted by the generator for a category.
const std::vector<std::string>& generator_apps(ContentCategory c);

// Deterministic for a fixed config.
Trace generate_trace(const GeneratorConfig& cfg);

// Probability that a non-static user is vehicular in the given hour of day.
double vehicular_probability(const GeneratorConfig& cfg, int hour_of_day);

}  // namespace fogcache
