#include "fogcache/trace.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "fogcache/csv.hpp"

namespace fogcache {

std::string_view to_string(Technology t) {
  switch (t) {
    case Technology::kWifi: return "wifi";
    case Technology::k3G: return "3g";
    case Technology::kLte: return "lte";
    case Technology::kOther: return "other";
    case Technology::kNone: return "none";
  }
  return "none";
}

std::optional<Technology> parse_technology(std::string_view s) {
  if (s == "wifi") return Technology::kWifi;
  if (s == "3g") return Technology::k3G;
  if (s == "lte") return Technology::kLte;
  if (s == "other") return Technology::kOther;
  if (s == "none") return Technology::kNone;
  return std::nullopt;
}

bool is_cellular(Technology t) {
  return t == Technology::k3G || t == Technology::kLte || t == Technology::kOther;
}

std::string format_day(const Day& d) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(d.year()),
                     static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
}

std::optional<Day> parse_day(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto y = csv::parse_int(s.substr(0, 4));
  auto m = csv::parse_int(s.substr(5, 2));
  auto d = csv::parse_int(s.substr(8, 2));
  if (!y || !m || !d || *m < 1 || *d < 1) return std::nullopt;
  Day day{std::chrono::year(static_cast<int>(*y)), std::chrono::month(static_cast<unsigned>(*m)),
          std::chrono::day(static_cast<unsigned>(*d))};
  if (!day.ok()) return std::nullopt;
  return day;
}

std::optional<std::string> validate(const TraceRecord& r) {
  if (!r.day.ok()) return "day is not a valid date";
  if (r.hour < 0 || r.hour > 23) return "hour out of range";
  if (!std::isfinite(r.position.lat) || r.position.lat < -90.0 || r.position.lat > 90.0) {
    return "lat out of range";
  }
  if (!std::isfinite(r.position.lon) || r.position.lon < -180.0 || r.position.lon > 180.0) {
    return "lon out of range";
  }
  const bool no_cell_tech = r.tech == Technology::kWifi || r.tech == Technology::kNone;
  if (r.cell_id.empty() != no_cell_tech) {
    return "cell_id must be empty iff tech is wifi or none";
  }
  return std::nullopt;
}

TraceMeta Trace::compute_meta(const std::vector<TraceRecord>& records) {
  TraceMeta meta;
  meta.records = records.size();
  std::unordered_set<std::string_view> users;
  std::map<std::string, std::set<std::string_view>> cells;
  for (const auto& r : records) {
    users.insert(r.user_id);
    meta.total_bytes += r.bytes_down + r.bytes_up;
    if (!r.op.empty()) {
      auto& s = cells[r.op];
      if (!r.cell_id.empty()) s.insert(r.cell_id);
    }
  }
  meta.unique_users = users.size();
  for (const auto& [op, s] : cells) meta.cells_per_operator[op] = s.size();
  return meta;
}

Trace::Trace(std::vector<TraceRecord> records)
    : records_(std::move(records)), meta_(compute_meta(records_)) {}

namespace {

[[noreturn]] void row_error(std::size_t line, std::string_view field, std::string_view what) {
  throw DataError(fmt::format("trace row {}: field '{}': {}", line, field, what));
}

std::uint64_t parse_bytes(std::string_view s, std::size_t line, std::string_view field) {
  auto v = csv::parse_int(s);
  if (!v) row_error(line, field, fmt::format("not an integer: '{}'", s));
  if (*v < 0) row_error(line, field, "negative byte count");
  return static_cast<std::uint64_t>(*v);
}

}  // namespace

Trace parse_trace_csv(std::istream& in) {
  std::string line;
  if (!csv::read_line(in, line)) {
    throw DataError("trace file is empty");
  }
  if (line != kTraceHeader) {
    throw DataError(fmt::format("trace row 1: unexpected header '{}', expected '{}'", line,
                                kTraceHeader));
  }
  std::vector<TraceRecord> records;
  std::size_t line_no = 1;
  while (csv::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    try {
      f = csv::split_line(line);
    } catch (const std::invalid_argument& e) {
      row_error(line_no, "(row)", e.what());
    }
    if (f.size() != 11) {
      row_error(line_no, "(row)", fmt::format("expected 11 columns, found {}", f.size()));
    }
    TraceRecord r;
    auto day = parse_day(f[0]);
    if (!day) row_error(line_no, "day", fmt::format("not a YYYY-MM-DD date: '{}'", f[0]));
    r.day = *day;
    auto hour = csv::parse_int(f[1]);
    if (!hour) row_error(line_no, "hour", fmt::format("not an integer: '{}'", f[1]));
    if (*hour < 0 || *hour > 23) row_error(line_no, "hour", "hour out of range");
    r.hour = static_cast<int>(*hour);
    r.user_id = std::move(f[2]);
    auto lat = csv::parse_double(f[3]);
    if (!lat) row_error(line_no, "lat", fmt::format("not a number: '{}'", f[3]));
    auto lon = csv::parse_double(f[4]);
    if (!lon) row_error(line_no, "lon", fmt::format("not a number: '{}'", f[4]));
    r.position = {*lat, *lon};
    r.op = std::move(f[5]);
    r.cell_id = std::move(f[6]);
    auto tech = parse_technology(f[7]);
    if (!tech) row_error(line_no, "tech", fmt::format("unknown technology '{}'", f[7]));
    r.tech = *tech;
    r.app_class = std::move(f[8]);
    r.bytes_down = parse_bytes(f[9], line_no, "bytes_down");
    r.bytes_up = parse_bytes(f[10], line_no, "bytes_up");
    if (auto err = validate(r)) {
      std::string_view field = "(row)";
      if (err->starts_with("lat")) field = "lat";
      if (err->starts_with("lon")) field = "lon";
      if (err->starts_with("cell_id")) field = "cell_id";
      row_error(line_no, field, *err);
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) {
    throw DataError("trace file has no data rows");
  }
  return Trace(std::move(records));
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open trace file " + path.string());
  }
  return parse_trace_csv(in);
}

std::string trace_to_csv(const Trace& trace) {
  std::string out(kTraceHeader);
  out.push_back('\n');
  for (const auto& r : trace.records()) {
    csv::append_row(out, {format_day(r.day), std::to_string(r.hour), r.user_id,
                          csv::format_double(r.position.lat), csv::format_double(r.position.lon),
                          r.op, r.cell_id, std::string(to_string(r.tech)), r.app_class,
                          std::to_string(r.bytes_down), std::to_string(r.bytes_up)});
  }
  return out;
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  csv::write_atomic(path, trace_to_csv(trace));
}

TraceSummary trace_summary(const Trace& trace) {
  TraceSummary s;
  const auto& meta = trace.meta();
  s.records = meta.records;
  s.unique_users = meta.unique_users;
  s.total_bytes = meta.total_bytes;
  std::map<std::string, OperatorSummary> ops;
  for (const auto& r : trace.records()) {
    if (r.op.empty()) continue;
    auto& o = ops[r.op];
    o.op = r.op;
    ++o.records;
    o.bytes += r.bytes_down + r.bytes_up;
  }
  for (auto& [op, o] : ops) {
    auto it = meta.cells_per_operator.find(op);
    o.cells = it == meta.cells_per_operator.end() ? 0 : it->second;
    s.operators.push_back(std::move(o));
  }
  return s;
}

std::string summary_to_text(const TraceSummary& s) {
  std::string out;
  out += fmt::format("records       {}\n", s.records);
  out += fmt::format("unique users  {}\n", s.unique_users);
  out += fmt::format("total bytes   {}\n", s.total_bytes);
  out += fmt::format("{:<12} {:>8} {:>10} {:>16}\n", "operator", "cells", "records", "bytes");
  for (const auto& o : s.operators) {
    out += fmt::format("{:<12} {:>8} {:>10} {:>16}\n", o.op, o.cells, o.records, o.bytes);
  }
  return out;
}

}  // namespace fogcache
