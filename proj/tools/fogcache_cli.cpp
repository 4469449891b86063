// fogcache: command-line front end.
//
//   fogcache generate  --config cfg.json [--set k=v]... --out trace.csv
//   fogcache summarize (--trace trace.csv | --config cfg.json)
//   fogcache topology  --config cfg.json [--operator NAME] --out-dir DIR
//   fogcache run       --config cfg.json [--set k=v]...
//   fogcache sweep     --config cfg.json [--set k=v]...
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <iostream>
#include <set>
#include <tuple>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fogcache/config.hpp"
#include "fogcache/csv.hpp"
#include "fogcache/experiments.hpp"
#include "fogcache/generator.hpp"
#include "fogcache/mobility.hpp"
#include "fogcache/topology.hpp"
#include "fogcache/trace.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kDataError = 3;

void print_mobility(const fogcache::Trace& trace) {
  using namespace fogcache;
  const auto classes = classify_user_hours(trace);
  const auto per_user = per_user_max_displacement(classes);
  std::size_t never_moving = 0;
  for (const auto& u : per_user) {
    if (u.max_km < kStaticThresholdKm) ++never_moving;
  }
  std::set<std::tuple<std::string, int, int>> vehicular_hours;
  for (const auto& c : classes) {
    if (c.cls == MobilityClass::kVehicular) {
      vehicular_hours.emplace(c.user_id, std::chrono::sys_days(c.day).time_since_epoch().count(),
                              c.hour);
    }
  }
  std::uint64_t vehicular_bytes = 0;
  std::uint64_t vehicular_cellular_bytes = 0;
  for (const auto& r : trace.records()) {
    if (!vehicular_hours.contains(
            {r.user_id, std::chrono::sys_days(r.day).time_since_epoch().count(), r.hour})) {
      continue;
    }
    vehicular_bytes += r.bytes_down + r.bytes_up;
    if (is_cellular(r.tech)) vehicular_cellular_bytes += r.bytes_down + r.bytes_up;
  }
  auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };
  fmt::print("user-hours    {}\n", classes.size());
  fmt::print("vehicular     {} ({:.3f})\n", vehicular_hours.size(),
             ratio(static_cast<double>(vehicular_hours.size()), static_cast<double>(classes.size())));
  fmt::print("static users  {} ({:.3f})\n", never_moving,
             ratio(static_cast<double>(never_moving), static_cast<double>(per_user.size())));
  fmt::print("vehicular traffic on cellular  {:.3f}\n",
             ratio(static_cast<double>(vehicular_cellular_bytes), static_cast<double>(vehicular_bytes)));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fogcache;
  CLI::App app{"Cache-architecture sizing for vehicular content demand"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON config file");
    sub->add_option("--set", overrides, "Override a config key: key.path=value");
  };

  auto* gen = app.add_subcommand("generate", "Synthesise a trace CSV");
  add_config(gen);
  std::string out_path;
  gen->add_option("-o,--out", out_path, "Output trace CSV")->required();

  auto* sum = app.add_subcommand("summarize", "Print trace counts and mobility statistics");
  add_config(sum);
  std::string trace_path;
  sum->add_option("-t,--trace", trace_path, "Trace CSV (default: the config's trace source)");

  auto* topo = app.add_subcommand("topology", "Estimate cell sites and export operator topologies");
  add_config(topo);
  std::string op_name;
  std::string out_dir;
  topo->add_option("--operator", op_name, "Only this operator");
  topo->add_option("-o,--out-dir", out_dir, "Directory for <operator>.json files")->required();

  auto* run_cmd = app.add_subcommand("run", "Evaluate the four architectures once");
  add_config(run_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate over the configured p or q grid");
  add_config(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (sum->parsed() && !trace_path.empty()) {
      const auto trace = load_trace(trace_path);
      std::cout << summary_to_text(trace_summary(trace));
      print_mobility(trace);
      return 0;
    }
    auto cfg = load_config(config_path, overrides);
    if (gen->parsed()) {
      if (cfg.trace.path) throw ConfigError("generate needs a generator trace source, not a path");
      const auto trace = generate_trace(cfg.trace.generator);
      write_trace(trace, out_path);
      fmt::print("wrote {} records to {}\n", trace.size(), out_path);
    } else if (sum->parsed()) {
      const auto trace = materialize_trace(cfg);
      std::cout << summary_to_text(trace_summary(trace));
      print_mobility(trace);
    } else if (topo->parsed()) {
      const auto trace = materialize_trace(cfg);
      std::vector<std::string> ops;
      if (!op_name.empty()) {
        ops.push_back(op_name);
      } else {
        for (const auto& [op, _] : trace.meta().cells_per_operator) ops.push_back(op);
      }
      for (const auto& op : ops) {
        const auto sites = estimate_cell_sites(trace, op);
        const auto t = build_topology(sites, cfg.ring_size, cfg.pod_fanout);
        const auto path = std::filesystem::path(out_dir) / (file_token(op) + ".json");
        csv::write_atomic(path, topology_to_json(t));
        fmt::print("{}: {} cells -> {}\n", op, sites.size(), path.string());
      }
    } else if (run_cmd->parsed()) {
      if (cfg.sweep != SweepVariable::kNone) {
        std::cerr << "note: run ignores the configured sweep; use `sweep` to evaluate the grid\n";
        cfg.sweep = SweepVariable::kNone;
      }
      const auto result = run(cfg);
      std::cout << metrics_csv(result);
    } else if (sweep_cmd->parsed()) {
      if (cfg.sweep == SweepVariable::kNone) {
        throw ConfigError("sweep requires sweep.variable to be p or q");
      }
      const auto result = run(cfg);
      std::cout << sweep_csv(result);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
