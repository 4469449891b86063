#include <doctest.h>

#include "fogcache/config.hpp"

using namespace fogcache;
using nlohmann::json;

TEST_CASE("empty document gives the defaults") {
  const auto cfg = config_from_json(json::object());
  CHECK(cfg.target_hit_ratio == 0.8);
  CHECK(cfg.ring_size == 10);
  CHECK(cfg.pod_fanout == 10);
  CHECK(cfg.sweep == SweepVariable::kNone);
  CHECK(cfg.effective_grid() == std::vector<double>{0.0});
  CHECK(cfg.trace.generator.n_users == 644);
  CHECK_FALSE(cfg.trace.path.has_value());
}

TEST_CASE("dotted overrides") {
  json doc = json::object();
  apply_override(doc, "sweep.variable=q");
  apply_override(doc, "sweep.values=[0,0.5,1]");
  apply_override(doc, "seed=42");
  apply_override(doc, "output_dir=results/run1");
  apply_override(doc, "trace.generator.n_users=50");
  const auto cfg = config_from_json(doc);
  CHECK(cfg.sweep == SweepVariable::kQ);
  CHECK(cfg.grid == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(cfg.seed == 42);
  CHECK(cfg.trace.generator.seed == 42);
  CHECK(cfg.demand.seed == 42);
  CHECK(cfg.output_dir == "results/run1");
  CHECK(cfg.trace.generator.n_users == 50);
  CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "seed.x=1"), ConfigError);
}

TEST_CASE("scale divides the reference magnitudes") {
  json doc = {{"trace", {{"scale", 1000}}}};
  const auto cfg = config_from_json(doc);
  CHECK(cfg.trace.generator.n_users == 64);
  CHECK(cfg.trace.generator.operators[0].cells == 17);
}

TEST_CASE("invalid documents are configuration errors") {
  CHECK_THROWS_AS(config_from_json({{"unknown_key", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"demand", {{"typo", 1}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"target_hit_ratio", 0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"target_hit_ratio", 1.1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"ring_size", 0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"ring_size", "ten"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"sweep", {{"variable", "r"}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"sweep", {{"variable", "p"}, {"values", json::array()}}}}),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json({{"sweep", {{"variable", "p"}, {"values", {0.5, 0.2}}}}}),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json({{"sweep", {{"variable", "q"}, {"values", {0.5, 1.5}}}}}),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json({{"distance_weighting", "median"}}), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json", {}), ConfigError);
}

TEST_CASE("config json round-trip") {
  json doc = {{"seed", 9},
              {"sweep", {{"variable", "p"}, {"values", {0.0, 0.25}}}},
              {"distance_weighting", "per_item"},
              {"demand", {{"top_selection", "uniform"}}}};
  const auto cfg = config_from_json(doc);
  const auto out = config_to_json(cfg);
  const auto again = config_from_json(json::parse(out.dump()));
  CHECK(config_to_json(again).dump() == out.dump());
  CHECK(again.distance_weighting == DistanceWeighting::kPerItem);
  CHECK(again.demand.top_selection == TopSelection::kUniform);
}

TEST_CASE("shipped configs parse") {
  const std::string root = FOGCACHE_SOURCE_DIR;
  CHECK(load_config(root + "/configs/default.json", {}).sweep == SweepVariable::kNone);
  CHECK(load_config(root + "/configs/sweep_p.json", {}).grid.size() == 6);
  CHECK(load_config(root + "/configs/sweep_q.json", {}).grid.back() == 1.0);
}

TEST_CASE("sweep without values uses the default grid") {
  const auto cfg = config_from_json({{"sweep", {{"variable", "p"}}}});
  CHECK(cfg.grid == kDefaultSweepGrid);
  CHECK(cfg.effective_grid().size() == 6);
}
