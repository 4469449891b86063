#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fogcache/trace.hpp"

namespace fogcache {

inline constexpr double kVehicularThresholdKm = 5.0;
inline constexpr double kStaticThresholdKm = 0.05;

enum class MobilityClass { kStatic, kPedestrian, kVehicular };

std::string_view to_string(MobilityClass c);
MobilityClass classify_displacement(double km);

// Declaration order is the iteration order.
enum class ContentCategory {
  kYouTube,
  kOnDemand,
  kRealTime,
  kPlayers,
  kWeather,
  kMaps,
  kNews,
  kSports,
  kOther,
};

inline constexpr std::size_t kNumCategories = 9;
inline constexpr std::array<ContentCategory, kNumCategories> kAllCategories = {
    ContentCategory::kYouTube, ContentCategory::kOnDemand, ContentCategory::kRealTime,
    ContentCategory::kPlayers, ContentCategory::kWeather,  ContentCategory::kMaps,
    ContentCategory::kNews,    ContentCategory::kSports,   ContentCategory::kOther,
};

std::string_view to_string(ContentCategory c);
// Case-insensitive.
std::optional<ContentCategory> parse_category(std::string_view s);
inline std::size_t index_of(ContentCategory c) { return static_cast<std::size_t>(c); }

struct UserHourClass {
  std::string user_id;
  Day day{};
  int hour = 0;
  double displacement_km = 0.0;
  MobilityClass cls = MobilityClass::kStatic;
};

// Sum of great-circle distances between consecutive fixes. Throws
// std::invalid_argument on an empty span.
double hourly_displacement(std::span<const GeoPoint> fixes);

// One entry per (user, day, hour) present in the trace, ordered by
// (user_id, day, hour). Fixes are taken in record order.
std::vector<UserHourClass> classify_user_hours(const Trace& trace);

struct HourFraction {
  Day day{};
  int hour = 0;
  std::size_t users = 0;
  std::size_t vehicular = 0;
  double fraction = 0.0;
};

// Vehicular share of classified users per (day, hour), in time order.
std::vector<HourFraction> vehicular_fraction_series(std::span<const UserHourClass> classes);

// Mean vehicular fraction per hour of day (index 0..23), averaging the
// series over days. Hours with no users are 0.
std::array<double, 24> hour_of_day_profile(std::span<const HourFraction> series);

struct UserMaxDisplacement {
  std::string user_id;
  double max_km = 0.0;
};

// Per-user maximum hourly displacement, ordered by user_id.
std::vector<UserMaxDisplacement> per_user_max_displacement(std::span<const UserHourClass> classes);

struct CategoryRule {
  std::string pattern;  // stored upper-case
  ContentCategory category = ContentCategory::kOther;
};

// Ordered substring rules mapping app class names to categories.
class CategoryRules {
 public:
  CategoryRules() = default;
  explicit CategoryRules(std::vector<CategoryRule> rules);

  // Rules covering the named apps of each category.
  static CategoryRules defaults();

  // `PATTERN<TAB>CATEGORY` per line, '#' comments and blank lines ignored.
  static CategoryRules parse(std::string_view text);
  static CategoryRules load(const std::filesystem::path& path);

  std::string to_text() const;

  ContentCategory categorize(std::string_view app_class) const;
  const std::vector<CategoryRule>& rules() const { return rules_; }

 private:
  std::vector<CategoryRule> rules_;
};

// First matching rule wins; case-insensitive substring; no match -> OTHER.
ContentCategory categorize_app(std::string_view app_class, const CategoryRules& rules);

// Keeps the records whose user-hour is VEHICULAR and whose technology is
// cellular. Throws DataError when a record's user-hour is not classified.
Trace vehicular_cellular_demand(const Trace& trace, std::span<const UserHourClass> classes);

// Demand-side view of a trace record.
struct CategorizedRecord {
  std::string op;
  std::string cell_id;
  std::string app_class;
  ContentCategory category = ContentCategory::kOther;
  std::uint64_t bytes = 0;
};

std::vector<CategorizedRecord> categorize_records(const Trace& trace, const CategoryRules& rules);

}  // namespace fogcache
