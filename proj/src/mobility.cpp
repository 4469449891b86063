#include "fogcache/mobility.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

namespace fogcache {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// (user, day as sys_days count, hour)
using UserHourKey = std::tuple<std::string_view, int, int>;

UserHourKey key_of(const TraceRecord& r) {
  return {r.user_id, std::chrono::sys_days(r.day).time_since_epoch().count(), r.hour};
}

}  // namespace

std::string_view to_string(MobilityClass c) {
  switch (c) {
    case MobilityClass::kStatic: return "static";
    case MobilityClass::kPedestrian: return "pedestrian";
    case MobilityClass::kVehicular: return "vehicular";
  }
  return "static";
}

MobilityClass classify_displacement(double km) {
  if (km > kVehicularThresholdKm) return MobilityClass::kVehicular;
  if (km < kStaticThresholdKm) return MobilityClass::kStatic;
  return MobilityClass::kPedestrian;
}

std::string_view to_string(ContentCategory c) {
  switch (c) {
    case ContentCategory::kYouTube: return "YOUTUBE";
    case ContentCategory::kOnDemand: return "ONDEMAND";
    case ContentCategory::kRealTime: return "REALTIME";
    case ContentCategory::kPlayers: return "PLAYERS";
    case ContentCategory::kWeather: return "WEATHER";
    case ContentCategory::kMaps: return "MAPS";
    case ContentCategory::kNews: return "NEWS";
    case ContentCategory::kSports: return "SPORTS";
    case ContentCategory::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<ContentCategory> parse_category(std::string_view s) {
  const auto u = upper(s);
  for (auto c : kAllCategories) {
    if (to_string(c) == u) return c;
  }
  return std::nullopt;
}

double hourly_displacement(std::span<const GeoPoint> fixes) {
  if (fixes.empty()) {
    throw std::invalid_argument("hourly_displacement: no position fixes");
  }
  double km = 0.0;
  for (std::size_t i = 1; i < fixes.size(); ++i) km += haversine_km(fixes[i - 1], fixes[i]);
  return km;
}

std::vector<UserHourClass> classify_user_hours(const Trace& trace) {
  std::map<UserHourKey, std::vector<GeoPoint>> groups;
  std::map<UserHourKey, Day> days;
  for (const auto& r : trace.records()) {
    auto key = key_of(r);
    groups[key].push_back(r.position);
    days.emplace(key, r.day);
  }
  std::vector<UserHourClass> out;
  out.reserve(groups.size());
  for (const auto& [key, fixes] : groups) {
    UserHourClass c;
    c.user_id = std::string(std::get<0>(key));
    c.day = days.at(key);
    c.hour = std::get<2>(key);
    c.displacement_km = hourly_displacement(fixes);
    c.cls = classify_displacement(c.displacement_km);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<HourFraction> vehicular_fraction_series(std::span<const UserHourClass> classes) {
  std::map<std::pair<int, int>, HourFraction> by_time;
  for (const auto& c : classes) {
    const int day = std::chrono::sys_days(c.day).time_since_epoch().count();
    auto& h = by_time[{day, c.hour}];
    h.day = c.day;
    h.hour = c.hour;
    ++h.users;
    if (c.cls == MobilityClass::kVehicular) ++h.vehicular;
  }
  std::vector<HourFraction> out;
  out.reserve(by_time.size());
  for (auto& [_, h] : by_time) {
    h.fraction = static_cast<double>(h.vehicular) / static_cast<double>(h.users);
    out.push_back(h);
  }
  return out;
}

std::array<double, 24> hour_of_day_profile(std::span<const HourFraction> series) {
  std::array<double, 24> sum{};
  std::array<int, 24> n{};
  for (const auto& h : series) {
    sum[static_cast<std::size_t>(h.hour)] += h.fraction;
    ++n[static_cast<std::size_t>(h.hour)];
  }
  std::array<double, 24> out{};
  for (std::size_t i = 0; i < 24; ++i) out[i] = n[i] > 0 ? sum[i] / n[i] : 0.0;
  return out;
}

std::vector<UserMaxDisplacement> per_user_max_displacement(
    std::span<const UserHourClass> classes) {
  std::map<std::string_view, double> best;
  for (const auto& c : classes) {
    auto [it, inserted] = best.emplace(c.user_id, c.displacement_km);
    if (!inserted) it->second = std::max(it->second, c.displacement_km);
  }
  std::vector<UserMaxDisplacement> out;
  out.reserve(best.size());
  for (const auto& [u, km] : best) out.push_back({std::string(u), km});
  return out;
}

CategoryRules::CategoryRules(std::vector<CategoryRule> rules) : rules_(std::move(rules)) {
  for (auto& r : rules_) {
    if (trim(r.pattern).empty()) throw DataError("category rule with empty pattern");
    r.pattern = upper(r.pattern);
  }
}

CategoryRules CategoryRules::defaults() {
  using C = ContentCategory;
  return CategoryRules({
      {"YOUTUBE", C::kYouTube},
      {"NETFLIX", C::kOnDemand},
      {"TWC", C::kOnDemand},
      {"TIMEWARNER", C::kOnDemand},
      {"SHOWTIME", C::kOnDemand},
      {"HULU", C::kOnDemand},
      {"AMAZON.AVOD", C::kOnDemand},
      {"PERISCOPE", C::kRealTime},
      {"DIRECTV", C::kRealTime},
      {"DTVE", C::kRealTime},
      {"VLC", C::kPlayers},
      {"VIDEOLAN", C::kPlayers},
      {"HTC.VIDEO", C::kPlayers},
      {"MXTECH", C::kPlayers},
      {"WEATHER", C::kWeather},
      {"ACCUWEATHER", C::kWeather},
      {"MAPS", C::kMaps},
      {"WAZE", C::kMaps},
      {"CNN", C::kNews},
      {"NBC", C::kNews},
      {"NEWS", C::kNews},
      {"NFL", C::kSports},
      {"FOXSPORTS", C::kSports},
      {"ESPN", C::kSports},
  });
}

CategoryRules CategoryRules::parse(std::string_view text) {
  std::vector<CategoryRule> rules;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(fmt::format("category rules line {}: expected PATTERN<TAB>CATEGORY", line_no));
    }
    auto pattern = trim(line.substr(0, tab));
    auto cat_name = trim(line.substr(tab + 1));
    auto cat = parse_category(cat_name);
    if (!cat) {
      throw DataError(fmt::format("category rules line {}: unknown category '{}'", line_no, cat_name));
    }
    if (pattern.empty()) {
      throw DataError(fmt::format("category rules line {}: empty pattern", line_no));
    }
    rules.push_back({std::string(pattern), *cat});
  }
  return CategoryRules(std::move(rules));
}

CategoryRules CategoryRules::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open category rules " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string CategoryRules::to_text() const {
  std::string out;
  for (const auto& r : rules_) out += fmt::format("{}\t{}\n", r.pattern, to_string(r.category));
  return out;
}

ContentCategory CategoryRules::categorize(std::string_view app_class) const {
  const auto u = upper(app_class);
  for (const auto& r : rules_) {
    if (u.find(r.pattern) != std::string::npos) return r.category;
  }
  return ContentCategory::kOther;
}

ContentCategory categorize_app(std::string_view app_class, const CategoryRules& rules) {
  return rules.categorize(app_class);
}

Trace vehicular_cellular_demand(const Trace& trace, std::span<const UserHourClass> classes) {
  std::map<UserHourKey, MobilityClass> lookup;
  for (const auto& c : classes) {
    lookup.emplace(UserHourKey{c.user_id, std::chrono::sys_days(c.day).time_since_epoch().count(),
                               c.hour},
                   c.cls);
  }
  std::vector<TraceRecord> kept;
  for (const auto& r : trace.records()) {
    auto it = lookup.find(key_of(r));
    if (it == lookup.end()) {
      throw DataError(fmt::format("user-hour ({}, {}, {}) has no mobility class", r.user_id,
                                  format_day(r.day), r.hour));
    }
    if (it->second == MobilityClass::kVehicular && is_cellular(r.tech)) kept.push_back(r);
  }
  return Trace(std::move(kept));
}

std::vector<CategorizedRecord> categorize_records(const Trace& trace, const CategoryRules& rules) {
  std::vector<CategorizedRecord> out;
  out.reserve(trace.size());
  for (const auto& r : trace.records()) {
    out.push_back({r.op, r.cell_id, r.app_class, rules.categorize(r.app_class), r.bytes_down});
  }
  return out;
}

}  // namespace fogcache
