#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogcache/geo.hpp"

namespace fogcache {

enum class Technology { kWifi, k3G, kLte, kOther, kNone };

std::string_view to_string(Technology t);
std::optional<Technology> parse_technology(std::string_view s);

// True for the technologies that put a record on a cell (3g, lte, other).
bool is_cellular(Technology t);

using Day = std::chrono::year_month_day;

std::string format_day(const Day& d);
std::optional<Day> parse_day(std::string_view s);

// One app-hour observation at one location.
struct TraceRecord {
  Day day{};
  int hour = 0;
  std::string user_id;
  GeoPoint position;
  std::string op;  // operator; empty when not on a cellular network
  std::string cell_id;
  Technology tech = Technology::kNone;
  std::string app_class;
  std::uint64_t bytes_down = 0;
  std::uint64_t bytes_up = 0;

  bool operator==(const TraceRecord&) const = default;
};

// Returns a description of the first violated record invariant, if any.
std::optional<std::string> validate(const TraceRecord& r);

struct TraceMeta {
  std::size_t records = 0;
  std::size_t unique_users = 0;
  std::map<std::string, std::size_t> cells_per_operator;
  std::uint64_t total_bytes = 0;  // down + up

  bool operator==(const TraceMeta&) const = default;
};

// Immutable, ordered collection of records with derived counts.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<TraceRecord> records);

  const std::vector<TraceRecord>& records() const { return records_; }
  const TraceMeta& meta() const { return meta_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  static TraceMeta compute_meta(const std::vector<TraceRecord>& records);

 private:
  std::vector<TraceRecord> records_;
  TraceMeta meta_;
};

inline constexpr std::string_view kTraceHeader =
    "day,hour,user_id,lat,lon,operator,cell_id,tech,app_class,bytes_down,bytes_up";

// Parses the trace CSV format. Throws DataError naming the 1-based line
// number and the offending column on any malformed row.
Trace parse_trace_csv(std::istream& in);
Trace load_trace(const std::filesystem::path& path);

std::string trace_to_csv(const Trace& trace);
void write_trace(const Trace& trace, const std::filesystem::path& path);

struct OperatorSummary {
  std::string op;
  std::size_t cells = 0;
  std::size_t records = 0;
  std::uint64_t bytes = 0;
};

struct TraceSummary {
  std::size_t records = 0;
  std::size_t unique_users = 0;
  std::uint64_t total_bytes = 0;
  std::vector<OperatorSummary> operators;  // sorted by operator name
};

TraceSummary trace_summary(const Trace& trace);

std::string summary_to_text(const TraceSummary& s);

}  // namespace fogcache
