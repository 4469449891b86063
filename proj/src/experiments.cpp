#include "fogcache/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "fogcache/csv.hpp"
#include "fogcache/generator.hpp"
#include "fogcache/mobility.hpp"
#include "fogcache/topology.hpp"

#ifndef FOGCACHE_VERSION
#define FOGCACHE_VERSION "dev"
#endif

namespace fogcache {

std::string software_version() { return FOGCACHE_VERSION; }

std::string file_token(std::string_view op) {
  std::string out;
  for (char c : op) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_');
  }
  return out.empty() ? "_" : out;
}

Trace materialize_trace(const ExperimentConfig& cfg) {
  if (cfg.trace.path) return load_trace(*cfg.trace.path);
  return generate_trace(cfg.trace.generator);
}

RunOutcome compute(const ExperimentConfig& cfg) { return compute(cfg, materialize_trace(cfg)); }

namespace {

struct OperatorInput {
  std::string op;
  Topology topology;
  RequestStream stream;
};

std::string fmt_value(double v) { return csv::format_double(v); }

}  // namespace

RunOutcome compute(const ExperimentConfig& cfg, const Trace& trace) {
  cfg.validate();
  RunOutcome outcome;
  auto& result = outcome.result;
  result.variable = cfg.sweep;

  const auto rules = cfg.category_rules ? CategoryRules::load(*cfg.category_rules)
                                        : CategoryRules::defaults();
  const auto classes = classify_user_hours(trace);
  const auto demand_trace = vehicular_cellular_demand(trace, classes);
  const auto records = categorize_records(demand_trace, rules);

  std::set<std::string> ops;
  if (cfg.operators.empty()) {
    for (const auto& [op, _] : trace.meta().cells_per_operator) ops.insert(op);
  } else {
    ops.insert(cfg.operators.begin(), cfg.operators.end());
  }
  outcome.log.push_back({"info", "trace",
                         {{"records", std::to_string(trace.size())},
                          {"users", std::to_string(trace.meta().unique_users)},
                          {"vehicular_cellular_records", std::to_string(demand_trace.size())}}});

  std::vector<OperatorInput> inputs;
  for (const auto& op : ops) {
    std::vector<CategorizedRecord> mine;
    for (const auto& r : records) {
      if (r.op == op) mine.push_back(r);
    }
    if (mine.empty()) {
      result.skipped.push_back(op);
      outcome.log.push_back(
          {"warning", "operator_skipped", {{"operator", op}, {"reason", "no vehicular-cellular records"}}});
      continue;
    }
    auto sites = estimate_cell_sites(trace, op);
    auto topology = build_topology(sites, cfg.ring_size, cfg.pod_fanout);
    auto stream = assign_content_ids(mine, cfg.demand, op);
    outcome.log.push_back({"info", "operator_ready",
                           {{"operator", op},
                            {"cells", std::to_string(sites.size())},
                            {"requests", std::to_string(stream.requests.size())}}});
    outcome.demand.emplace(op, aggregate(stream));
    outcome.topologies.emplace(op, topology);
    inputs.push_back({op, std::move(topology), std::move(stream)});
  }
  if (inputs.empty()) {
    throw DataError("no operator has vehicular-cellular demand; nothing to evaluate");
  }
  for (const auto& in : inputs) result.operators.push_back(in.op);

  const auto grid = cfg.effective_grid();
  struct Task {
    std::size_t input;
    double value;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (double v : grid) tasks.push_back({i, v});
  }
  result.points.resize(tasks.size());

  auto evaluate_task = [&](std::size_t t) {
    const auto& in = inputs[tasks[t].input];
    const double v = tasks[t].value;
    DemandMatrix demand;
    switch (cfg.sweep) {
      case SweepVariable::kNone:
        demand = aggregate(in.stream);
        break;
      case SweepVariable::kP:
        demand = aggregate(apply_recommendation(in.stream, v, cfg.demand, in.op).stream);
        break;
      case SweepVariable::kQ:
        demand = aggregate(apply_locality(in.stream, v, cfg.demand, in.op).stream);
        break;
    }
    result.points[t] = {in.op, v,
                        evaluate(demand, in.topology, cfg.target_hit_ratio, cfg.distance_weighting)};
  };

  // Each task writes only its own slot, so completion order does not matter.
  const auto hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads =
      std::min<std::size_t>(tasks.size(), cfg.threads == 0 ? hw : static_cast<std::size_t>(cfg.threads));
  if (n_threads <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) evaluate_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    {
      std::vector<std::jthread> workers;
      for (std::size_t w = 0; w < n_threads; ++w) {
        workers.emplace_back([&] {
          for (std::size_t t = next++; t < tasks.size(); t = next++) {
            try {
              evaluate_task(t);
            } catch (...) {
              std::lock_guard lock(failure_mu);
              if (!failure) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& p : result.points) {
    if (p.value != grid.front()) continue;
    const double pof = p.report.at(Architecture::kBaseStation).price_of_fog;
    lo = first ? pof : std::min(lo, pof);
    hi = first ? pof : std::max(hi, pof);
    first = false;
  }
  outcome.log.push_back({"info", "pof_band",
                         {{"architecture", "base_station"},
                          {"sweep_value", fmt_value(grid.front())},
                          {"min", csv::format_fixed(lo, 6)},
                          {"max", csv::format_fixed(hi, 6)}}});
  return outcome;
}

std::string metrics_csv(const SweepResult& result) {
  std::string out = "operator,architecture,total_size,price_of_fog,mean_distance_km,achieved_hit_ratio\n";
  for (const auto& p : result.points) {
    for (const auto& m : p.report.per_arch) {
      csv::append_row(out, {p.op, std::string(to_string(m.arch)), std::to_string(m.total_size),
                            csv::format_fixed(m.price_of_fog, 6),
                            csv::format_fixed(m.mean_distance_km, 6),
                            csv::format_fixed(p.report.achieved_hit_ratio, 6)});
    }
  }
  return out;
}

std::string sizes_csv(const SweepResult& result) {
  std::string out = "operator,architecture,node_id,size\n";
  for (const auto& p : result.points) {
    for (const auto& m : p.report.per_arch) {
      for (const auto& [node, size] : m.node_sizes) {
        csv::append_row(out, {p.op, std::string(to_string(m.arch)), node, std::to_string(size)});
      }
    }
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "operator,variable,value,architecture,total_size,price_of_fog,mean_distance_km,"
      "achieved_hit_ratio\n";
  for (const auto& p : result.points) {
    for (const auto& m : p.report.per_arch) {
      csv::append_row(out, {p.op, std::string(to_string(result.variable)), fmt_value(p.value),
                            std::string(to_string(m.arch)), std::to_string(m.total_size),
                            csv::format_fixed(m.price_of_fog, 6),
                            csv::format_fixed(m.mean_distance_km, 6),
                            csv::format_fixed(p.report.achieved_hit_ratio, 6)});
    }
  }
  return out;
}

namespace {

std::string scenario_label(SweepVariable v, double value) {
  if (v == SweepVariable::kNone) return "default";
  return fmt::format("{}={}", to_string(v), fmt_value(value));
}

}  // namespace

std::map<std::string, std::string> compare_report(const SweepResult& result) {
  const std::string var(to_string(result.variable));
  std::map<std::string, std::string> files;

  std::string node_sizes = "operator,variable,value,architecture,node_id,size\n";
  std::string totals = "operator,variable,value,architecture,total_size\n";
  std::string sweep = "operator,variable,value,architecture,total_size,price_of_fog\n";
  std::string distance = "operator,scenario,architecture,mean_distance_km\n";
  // (value, arch) -> sums over operators
  std::map<std::pair<double, int>, std::tuple<double, double, int>> means;

  for (const auto& p : result.points) {
    const auto value = fmt_value(p.value);
    for (const auto& m : p.report.per_arch) {
      const std::string arch(to_string(m.arch));
      for (const auto& [node, size] : m.node_sizes) {
        csv::append_row(node_sizes, {p.op, var, value, arch, node, std::to_string(size)});
      }
      csv::append_row(totals, {p.op, var, value, arch, std::to_string(m.total_size)});
      csv::append_row(sweep, {p.op, var, value, arch, std::to_string(m.total_size),
                              csv::format_fixed(m.price_of_fog, 6)});
      csv::append_row(distance, {p.op, scenario_label(result.variable, p.value), arch,
                                 csv::format_fixed(m.mean_distance_km, 6)});
      auto& acc = means[{p.value, static_cast<int>(m.arch)}];
      std::get<0>(acc) += static_cast<double>(m.total_size);
      std::get<1>(acc) += m.price_of_fog;
      std::get<2>(acc) += 1;
    }
  }
  std::string mean = "variable,value,architecture,mean_total_size,mean_price_of_fog\n";
  for (const auto& [key, acc] : means) {
    const auto n = static_cast<double>(std::get<2>(acc));
    csv::append_row(mean, {var, fmt_value(key.first),
                           std::string(to_string(static_cast<Architecture>(key.second))),
                           csv::format_fixed(std::get<0>(acc) / n, 6),
                           csv::format_fixed(std::get<1>(acc) / n, 6)});
  }
  files["report/node_sizes.csv"] = std::move(node_sizes);
  files["report/total_sizes.csv"] = std::move(totals);
  files["report/sweep_by_value.csv"] = std::move(sweep);
  files["report/sweep_operator_mean.csv"] = std::move(mean);
  files["report/distance.csv"] = std::move(distance);
  return files;
}

namespace {

std::vector<std::string> header_of(const std::string& csv_text) {
  return csv::split_line(std::string_view(csv_text).substr(0, csv_text.find('\n')));
}

}  // namespace

std::map<std::string, std::vector<std::string>> output_columns(const SweepResult& result) {
  std::map<std::string, std::vector<std::string>> cols;
  if (result.variable == SweepVariable::kNone) {
    cols["metrics.csv"] = header_of(metrics_csv({}));
    cols["sizes.csv"] = header_of(sizes_csv({}));
    cols["demand/<operator>.csv"] = header_of(demand_to_csv({}));
  } else {
    cols["sweep.csv"] = header_of(sweep_csv({}));
  }
  for (const auto& [name, text] : compare_report(SweepResult{result.variable, {}, {}, {}})) {
    cols[name] = header_of(text);
  }
  return cols;
}

SweepResult run(const ExperimentConfig& cfg) {
  auto outcome = compute(cfg);
  const auto& result = outcome.result;
  const auto& dir = cfg.output_dir;

  if (result.variable == SweepVariable::kNone) {
    csv::write_atomic(dir / "metrics.csv", metrics_csv(result));
    csv::write_atomic(dir / "sizes.csv", sizes_csv(result));
    for (const auto& [op, demand] : outcome.demand) {
      csv::write_atomic(dir / "demand" / (file_token(op) + ".csv"), demand_to_csv(demand));
    }
  } else {
    csv::write_atomic(dir / "sweep.csv", sweep_csv(result));
  }
  for (const auto& [op, topology] : outcome.topologies) {
    csv::write_atomic(dir / "topology" / (file_token(op) + ".json"), topology_to_json(topology));
  }
  for (const auto& [name, text] : compare_report(result)) csv::write_atomic(dir / name, text);

  nlohmann::ordered_json manifest;
  manifest["software"] = "fogcache";
  manifest["version"] = software_version();
  manifest["seed"] = cfg.seed;
  manifest["config"] = config_to_json(cfg);
  manifest["operators"] = result.operators;
  manifest["skipped_operators"] = result.skipped;
  nlohmann::ordered_json files;
  for (const auto& [name, cols] : output_columns(result)) files[name] = cols;
  manifest["files"] = files;
  csv::write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  std::string log;
  for (const auto& e : outcome.log) {
    nlohmann::ordered_json j;
    j["level"] = e.level;
    j["event"] = e.event;
    for (const auto& [k, v] : e.fields) j[k] = v;
    log += j.dump() + "\n";
  }
  csv::write_atomic(dir / "run.log", log);
  return outcome.result;
}

}  // namespace fogcache
