#pragma once

#include <map>
#include <string>
#include <vector>

#include "fogcache/caching.hpp"
#include "fogcache/config.hpp"
#include "fogcache/trace.hpp"

namespace fogcache {

struct SweepPoint {
  std::string op;
  double value = 0.0;
  MetricsReport report;
};

struct SweepResult {
  SweepVariable variable = SweepVariable::kNone;
  std::vector<SweepPoint> points;  // ordered by (operator, value)
  std::vector<std::string> operators;
  std::vector<std::string> skipped;  // operators skipped for lack of demand
};

// One JSON object per line; written to run.log.
struct LogEvent {
  std::string level;
  std::string event;
  std::vector<std::pair<std::string, std::string>> fields;
};

struct RunOutcome {
  SweepResult result;
  std::vector<LogEvent> log;
  std::map<std::string, Topology> topologies;
  // Untransformed demand per operator.
  std::map<std::string, DemandMatrix> demand;
};

// Obtains the trace named by the config: loads the CSV or runs the generator.
Trace materialize_trace(const ExperimentConfig& cfg);

// The full pipeline without touching the filesystem (beyond reading the
// trace / rule files). Throws DataError when every operator is skipped.
RunOutcome compute(const ExperimentConfig& cfg);
RunOutcome compute(const ExperimentConfig& cfg, const Trace& trace);

// Plot-ready tables keyed by file name (relative to the output directory).
std::map<std::string, std::string> compare_report(const SweepResult& result);

// Column lists of every CSV written by `run`, keyed by file name.
std::map<std::string, std::vector<std::string>> output_columns(const SweepResult& result);

// compute() plus every artifact: metrics / sweep CSVs, size distributions,
// per-operator topology and demand exports, report tables, manifest.json and
// run.log. Files are written atomically.
SweepResult run(const ExperimentConfig& cfg);

std::string metrics_csv(const SweepResult& result);
std::string sizes_csv(const SweepResult& result);
std::string sweep_csv(const SweepResult& result);

// Operator name reduced to a filesystem-safe token.
std::string file_token(std::string_view op);

std::string software_version();

}  // namespace fogcache
