#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fogcache/mobility.hpp"

namespace fogcache {

struct ContentItem {
  std::string item_id;  // always prefixed by the owning app_class
  std::string app_class;
  ContentCategory category = ContentCategory::kOther;
  std::optional<std::string> home_cell;  // location-specific items only

  bool operator==(const ContentItem&) const = default;
};

// Append-only interning table for content items.
class ItemCatalog {
 public:
  std::uint32_t intern(const ContentItem& item);
  const ContentItem& at(std::uint32_t index) const { return items_.at(index); }
  std::optional<std::uint32_t> find(std::string_view item_id) const;
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<ContentItem> items_;
  std::unordered_map<std::string, std::uint32_t> by_id_;
};

struct Request {
  std::string cell_id;
  std::uint32_t item = 0;  // index into the stream's catalog
  std::uint64_t bytes = 0;
};

// Ordered requests of one operator plus the items they reference.
struct RequestStream {
  ItemCatalog catalog;
  std::vector<Request> requests;

  const ContentItem& item_of(const Request& r) const { return catalog.at(r.item); }
};

enum class TopSelection { kPopularity, kUniform };

struct DemandPolicyConfig {
  std::uint64_t seed = 1;
  // NEWS / SPORTS: popular items per app.
  std::size_t popular_catalog_size = 50;
  // WEATHER / MAPS: location-specific items per (app, cell).
  std::size_t local_catalog_size = 10;
  double popular_hit_probability = 0.9;
  // YOUTUBE / ONDEMAND: per-app Zipf(s, N) catalogue standing in for view
  // counts.
  std::size_t ondemand_catalog_size = 10000;
  double zipf_exponent = 1.0;
  // Recommendation model: share of each app's items forming its top set.
  double recommendation_top_fraction = 0.05;
  TopSelection top_selection = TopSelection::kPopularity;
  // Location model: fresh items created per cell.
  std::size_t locality_items_per_cell = 5;

  void validate() const;
};

inline constexpr std::string_view kLocalAppClass = "LOCAL";

// One request per record. `scope` separates the random streams of
// independent request sets (e.g. one per operator). Throws DataError for a
// record without a cell.
RequestStream assign_content_ids(std::span<const CategorizedRecord> records,
                                 const DemandPolicyConfig& cfg, std::string_view scope = {});

struct Transformed {
  RequestStream stream;
  std::size_t switched = 0;  // requests whose item was redrawn
};

// Per app, the top max(1, floor(fraction * distinct items)) items by request
// count (ties by item_id) over the input; each request is switched to one of
// them with probability p. Throws std::invalid_argument for p outside [0, 1].
Transformed apply_recommendation(const RequestStream& in, double p, const DemandPolicyConfig& cfg,
                                 std::string_view scope = {});

// Each cell gets `locality_items_per_cell` fresh items; each request is
// switched to one of its cell's items with probability q. Throws
// std::invalid_argument for q outside [0, 1].
Transformed apply_locality(const RequestStream& in, double q, const DemandPolicyConfig& cfg,
                           std::string_view scope = {});

// The top set used by apply_recommendation, per app_class, in rank order.
std::map<std::string, std::vector<std::uint32_t>> recommendation_top_sets(
    const RequestStream& in, double top_fraction);

struct DemandCounts {
  std::uint64_t requests = 0;
  std::uint64_t bytes = 0;
};

// Request counts per (cell, item).
class DemandMatrix {
 public:
  using Key = std::pair<std::string, std::string>;  // (cell_id, item_id)

  void add(std::string_view cell_id, const ContentItem& item, std::uint64_t requests = 1,
           std::uint64_t bytes = 0);

  const std::map<Key, DemandCounts>& counts() const { return counts_; }
  const std::map<std::string, ContentItem>& catalog() const { return catalog_; }
  const ContentItem& item(const std::string& item_id) const { return catalog_.at(item_id); }
  std::uint64_t total_requests() const { return total_; }
  bool empty() const { return counts_.empty(); }

 private:
  std::map<Key, DemandCounts> counts_;
  std::map<std::string, ContentItem> catalog_;
  std::uint64_t total_ = 0;
};

DemandMatrix aggregate(const RequestStream& stream);

// `cell_id,item_id,app_class,category,requests,bytes`, sorted by (cell, item).
std::string demand_to_csv(const DemandMatrix& demand);

}  // namespace fogcache
