#include "fogcache/demand.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "fogcache/csv.hpp"
#include "fogcache/random.hpp"

namespace fogcache {

std::uint32_t ItemCatalog::intern(const ContentItem& item) {
  auto it = by_id_.find(item.item_id);
  if (it != by_id_.end()) return it->second;
  const auto index = static_cast<std::uint32_t>(items_.size());
  items_.push_back(item);
  by_id_.emplace(item.item_id, index);
  return index;
}

std::optional<std::uint32_t> ItemCatalog::find(std::string_view item_id) const {
  auto it = by_id_.find(std::string(item_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

void DemandPolicyConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(fmt::format("{} must be in [0, 1]", name));
  };
  prob(popular_hit_probability, "popular_hit_probability");
  prob(recommendation_top_fraction, "recommendation_top_fraction");
  if (popular_catalog_size < 1 || local_catalog_size < 1 || ondemand_catalog_size < 1 ||
      locality_items_per_cell < 1) {
    throw ConfigError("demand catalogue sizes must be >= 1");
  }
  if (!(zipf_exponent >= 0.0) || !std::isfinite(zipf_exponent)) {
    throw ConfigError("zipf_exponent must be a finite value >= 0");
  }
}

namespace {

// Cumulative Zipf weights 1/k^s, k = 1..n.
std::vector<double> zipf_cumulative(std::size_t n, double s) {
  std::vector<double> cum(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += 1.0 / std::pow(static_cast<double>(k + 1), s);
    cum[k] = acc;
  }
  return cum;
}

std::string scoped(std::string_view op, std::string_view scope) {
  return fmt::format("{}/{}", op, scope);
}

}  // namespace

RequestStream assign_content_ids(std::span<const CategorizedRecord> records,
                                 const DemandPolicyConfig& cfg, std::string_view scope) {
  cfg.validate();
  const auto zipf = zipf_cumulative(cfg.ondemand_catalog_size, cfg.zipf_exponent);
  const auto stream_name = scoped("assign_content_ids", scope);
  // (category, app) -> next fresh counter
  std::map<std::pair<ContentCategory, std::string>, std::uint64_t> fresh_counters;

  RequestStream out;
  out.requests.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.cell_id.empty()) {
      throw DataError(fmt::format("record {} (app {}) has no cell", i, rec.app_class));
    }
    KeyedStream rng(cfg.seed, stream_name, i);
    const double branch = rng.uniform();
    const double pick = rng.uniform();

    auto fresh = [&]() {
      auto& n = fresh_counters[{rec.category, rec.app_class}];
      return ContentItem{fmt::format("{}/{}/fresh-s{}-{}", rec.app_class, to_string(rec.category),
                                     cfg.seed, n++),
                         rec.app_class, rec.category, std::nullopt};
    };

    ContentItem item;
    switch (rec.category) {
      case ContentCategory::kRealTime:
      case ContentCategory::kPlayers:
      case ContentCategory::kOther:
        item = fresh();
        break;
      case ContentCategory::kYouTube:
      case ContentCategory::kOnDemand: {
        const auto rank = sample_cumulative(zipf, pick) + 1;
        item = {fmt::format("{}/v{}", rec.app_class, rank), rec.app_class, rec.category,
                std::nullopt};
        break;
      }
      case ContentCategory::kNews:
      case ContentCategory::kSports:
        if (branch < cfg.popular_hit_probability) {
          const auto k = static_cast<std::size_t>(pick * static_cast<double>(cfg.popular_catalog_size));
          item = {fmt::format("{}/pop{}", rec.app_class, std::min(k, cfg.popular_catalog_size - 1)),
                  rec.app_class, rec.category, std::nullopt};
        } else {
          item = fresh();
        }
        break;
      case ContentCategory::kWeather:
      case ContentCategory::kMaps:
        if (branch < cfg.popular_hit_probability) {
          const auto k = static_cast<std::size_t>(pick * static_cast<double>(cfg.local_catalog_size));
          item = {fmt::format("{}/cell/{}/{}", rec.app_class, rec.cell_id,
                              std::min(k, cfg.local_catalog_size - 1)),
                  rec.app_class, rec.category, rec.cell_id};
        } else {
          item = fresh();
        }
        break;
    }
    out.requests.push_back({rec.cell_id, out.catalog.intern(item), rec.bytes});
  }
  return out;
}

std::map<std::string, std::vector<std::uint32_t>> recommendation_top_sets(
    const RequestStream& in, double top_fraction) {
  std::map<std::string, std::map<std::uint32_t, std::uint64_t>> per_app;
  for (const auto& r : in.requests) ++per_app[in.item_of(r).app_class][r.item];
  std::map<std::string, std::vector<std::uint32_t>> top;
  for (const auto& [app, counts] : per_app) {
    std::vector<std::pair<std::uint32_t, std::uint64_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return in.catalog.at(a.first).item_id < in.catalog.at(b.first).item_id;
    });
    const auto n = static_cast<std::size_t>(
        std::floor(top_fraction * static_cast<double>(ranked.size()) + 1e-9));
    const std::size_t keep = std::max<std::size_t>(1, n);
    auto& set = top[app];
    for (std::size_t k = 0; k < keep && k < ranked.size(); ++k) set.push_back(ranked[k].first);
  }
  return top;
}

Transformed apply_recommendation(const RequestStream& in, double p, const DemandPolicyConfig& cfg,
                                 std::string_view scope) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(fmt::format("recommendation probability {} not in [0, 1]", p));
  }
  const auto top = recommendation_top_sets(in, cfg.recommendation_top_fraction);
  std::map<std::uint32_t, std::uint64_t> item_counts;
  for (const auto& r : in.requests) ++item_counts[r.item];

  // Cumulative selection weights per app.
  std::map<std::string, std::vector<double>> weights;
  for (const auto& [app, items] : top) {
    auto& cum = weights[app];
    double acc = 0.0;
    for (auto item : items) {
      acc += cfg.top_selection == TopSelection::kPopularity
                 ? static_cast<double>(item_counts.at(item))
                 : 1.0;
      cum.push_back(acc);
    }
  }

  Transformed out{in, 0};
  const auto stream_name = scoped("apply_recommendation", scope);
  for (std::size_t i = 0; i < out.stream.requests.size(); ++i) {
    auto& r = out.stream.requests[i];
    KeyedStream rng(cfg.seed, stream_name, i);
    // Both draws are taken for every request so the switched set grows
    // monotonically with p for a fixed seed.
    const double u = rng.uniform();
    const double v = rng.uniform();
    if (u < p) {
      const auto& app = in.item_of(r).app_class;
      r.item = top.at(app)[sample_cumulative(weights.at(app), v)];
      ++out.switched;
    }
  }
  return out;
}

Transformed apply_locality(const RequestStream& in, double q, const DemandPolicyConfig& cfg,
                           std::string_view scope) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument(fmt::format("locality probability {} not in [0, 1]", q));
  }
  Transformed out{in, 0};
  std::set<std::string> cells;
  for (const auto& r : in.requests) cells.insert(r.cell_id);
  std::map<std::string, std::vector<std::uint32_t>> local_items;
  for (const auto& cell : cells) {
    auto& items = local_items[cell];
    for (std::size_t k = 0; k < cfg.locality_items_per_cell; ++k) {
      items.push_back(out.stream.catalog.intern(
          {fmt::format("{}/{}/{}", kLocalAppClass, cell, k), std::string(kLocalAppClass),
           ContentCategory::kMaps, cell}));
    }
  }
  const auto stream_name = scoped("apply_locality", scope);
  for (std::size_t i = 0; i < out.stream.requests.size(); ++i) {
    auto& r = out.stream.requests[i];
    KeyedStream rng(cfg.seed, stream_name, i);
    const double u = rng.uniform();
    const auto k = rng.below(cfg.locality_items_per_cell);
    if (u < q) {
      r.item = local_items.at(r.cell_id)[k];
      ++out.switched;
    }
  }
  return out;
}

void DemandMatrix::add(std::string_view cell_id, const ContentItem& item, std::uint64_t requests,
                       std::uint64_t bytes) {
  if (requests == 0) return;
  auto& c = counts_[{std::string(cell_id), item.item_id}];
  c.requests += requests;
  c.bytes += bytes;
  total_ += requests;
  catalog_.try_emplace(item.item_id, item);
}

DemandMatrix aggregate(const RequestStream& stream) {
  DemandMatrix m;
  for (const auto& r : stream.requests) m.add(r.cell_id, stream.item_of(r), 1, r.bytes);
  return m;
}

std::string demand_to_csv(const DemandMatrix& demand) {
  std::string out = "cell_id,item_id,app_class,category,requests,bytes\n";
  for (const auto& [key, c] : demand.counts()) {
    const auto& item = demand.item(key.second);
    csv::append_row(out, {key.first, key.second, item.app_class, std::string(to_string(item.category)),
                          std::to_string(c.requests), std::to_string(c.bytes)});
  }
  return out;
}

}  // namespace fogcache
