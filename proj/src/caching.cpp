#include "fogcache/caching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace fogcache {

std::uint64_t required_hits(double target, std::uint64_t total) {
  const double need = target * static_cast<double>(total);
  if (need <= 0.0) return 0;
  const auto h = static_cast<std::uint64_t>(std::ceil(need - 1e-9 * std::max(1.0, need)));
  return std::min(h, total);
}

CacheWorthySet mark_cache_worthy(const DemandMatrix& demand, double target) {
  if (demand.empty()) throw std::invalid_argument("mark_cache_worthy: empty demand");
  if (!(target >= 0.0 && target <= 1.0)) {
    throw std::invalid_argument(fmt::format("target hit ratio {} not in [0, 1]", target));
  }
  std::vector<MarkedPair> ranked;
  ranked.reserve(demand.counts().size());
  // Map iteration is already (cell, item) ascending; a stable sort on count
  // keeps that as the tie order.
  for (const auto& [key, c] : demand.counts()) ranked.push_back({key.first, key.second, c.requests});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const MarkedPair& a, const MarkedPair& b) { return a.requests > b.requests; });

  CacheWorthySet cws;
  cws.target_hit_ratio = target;
  cws.total_requests = demand.total_requests();
  const auto need = required_hits(target, cws.total_requests);
  std::size_t n = 0;
  while (cws.hits < need) cws.hits += ranked[n++].requests;
  ranked.resize(n);
  cws.pairs = std::move(ranked);
  cws.achieved_hit_ratio =
      static_cast<double>(cws.hits) / static_cast<double>(cws.total_requests);
  return cws;
}

std::size_t Placement::total_size() const {
  std::size_t n = 0;
  for (const auto& [_, items] : items_by_node) n += items.size();
  return n;
}

namespace {

std::size_t base_station_or_throw(const Topology& topology, const std::string& cell) {
  try {
    return topology.base_station_index(cell);
  } catch (const std::out_of_range& e) {
    throw DataError(e.what());
  }
}

}  // namespace

Placement place(const CacheWorthySet& cws, const Topology& topology, Architecture arch) {
  Placement p;
  p.arch = arch;
  for (auto idx : topology.nodes_at(arch)) p.items_by_node[topology.node(idx).id];
  for (const auto& pair : cws.pairs) {
    const auto bs = base_station_or_throw(topology, pair.cell_id);
    const auto& node = topology.node(topology.ancestor_at(bs, arch));
    p.items_by_node[node.id].insert(pair.item_id);
  }
  return p;
}

std::map<Architecture, double> price_of_fog(const std::map<Architecture, Placement>& placements) {
  auto core = placements.find(Architecture::kCore);
  if (core == placements.end()) throw std::invalid_argument("price_of_fog: no core placement");
  const auto core_total = core->second.total_size();
  if (core_total == 0) throw std::invalid_argument("price_of_fog: core placement is empty");
  std::map<Architecture, double> pof;
  for (const auto& [arch, p] : placements) {
    pof[arch] = static_cast<double>(p.total_size()) / static_cast<double>(core_total);
  }
  return pof;
}

double mean_data_distance(const CacheWorthySet& cws, const Placement& placement,
                          const Topology& topology, DistanceWeighting weighting) {
  if (cws.pairs.empty()) throw std::invalid_argument("mean_data_distance: no cache-worthy pairs");
  double weighted = 0.0;
  double weight = 0.0;
  for (const auto& pair : cws.pairs) {
    const auto bs = base_station_or_throw(topology, pair.cell_id);
    const auto node = topology.ancestor_at(bs, placement.arch);
    const double km = node == bs ? 0.0
                                 : haversine_km(topology.node(node).position,
                                                topology.node(bs).position);
    const double w =
        weighting == DistanceWeighting::kPerRequest ? static_cast<double>(pair.requests) : 1.0;
    weighted += w * km;
    weight += w;
  }
  return weighted / weight;
}

std::vector<std::size_t> size_distribution(const Placement& placement) {
  std::vector<std::size_t> sizes;
  sizes.reserve(placement.items_by_node.size());
  for (const auto& [_, items] : placement.items_by_node) sizes.push_back(items.size());
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

MetricsReport evaluate(const DemandMatrix& demand, const Topology& topology, double target,
                       DistanceWeighting weighting) {
  const auto cws = mark_cache_worthy(demand, target);
  MetricsReport report;
  report.op = topology.op();
  report.target_hit_ratio = target;
  report.achieved_hit_ratio = cws.achieved_hit_ratio;
  report.cache_worthy_pairs = cws.pairs.size();

  std::map<Architecture, Placement> placements;
  for (auto arch : kAllArchitectures) placements.emplace(arch, place(cws, topology, arch));
  const auto pof = price_of_fog(placements);

  // Mean bytes per request of each marked item, for the optional byte column.
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> item_bytes;
  for (const auto& pair : cws.pairs) {
    const auto& c = demand.counts().at({pair.cell_id, pair.item_id});
    auto& acc = item_bytes[pair.item_id];
    acc.first += c.bytes;
    acc.second += c.requests;
  }

  for (auto arch : kAllArchitectures) {
    const auto& p = placements.at(arch);
    auto& m = report.per_arch[static_cast<std::size_t>(arch)];
    m.arch = arch;
    m.total_size = p.total_size();
    m.price_of_fog = pof.at(arch);
    m.mean_distance_km = mean_data_distance(cws, p, topology, weighting);
    double bytes = 0.0;
    for (const auto& [node, items] : p.items_by_node) {
      m.node_sizes.emplace_back(node, items.size());
      for (const auto& item : items) {
        const auto& [b, n] = item_bytes.at(item);
        bytes += static_cast<double>(b) / static_cast<double>(n);
      }
    }
    m.mean_bytes_per_item = m.total_size > 0 ? bytes / static_cast<double>(m.total_size) : 0.0;
  }
  return report;
}

}  // namespace fogcache
