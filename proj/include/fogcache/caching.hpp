#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fogcache/demand.hpp"
#include "fogcache/topology.hpp"

namespace fogcache {

// Where caches are deployed: at every node of the given tree level.
using Architecture = Level;
inline constexpr std::array<Architecture, 4> kAllArchitectures = kAllLevels;

struct MarkedPair {
  std::string cell_id;
  std::string item_id;
  std::uint64_t requests = 0;
};

struct CacheWorthySet {
  std::vector<MarkedPair> pairs;  // count descending, then (cell, item)
  double target_hit_ratio = 0.0;
  double achieved_hit_ratio = 0.0;
  std::uint64_t total_requests = 0;
  std::uint64_t hits = 0;  // sum of marked counts
};

// Smallest hit count h with h >= target * total (tolerant to rounding of the
// product).
std::uint64_t required_hits(double target, std::uint64_t total);

// Greedy prefix of pairs sorted by popularity reaching the target hit ratio.
// Throws std::invalid_argument for empty demand or target outside [0, 1].
CacheWorthySet mark_cache_worthy(const DemandMatrix& demand, double target);

struct Placement {
  Architecture arch = Architecture::kCore;
  // Every node of the architecture's level, including those left empty.
  std::map<std::string, std::set<std::string>> items_by_node;

  std::size_t total_size() const;
};

// Stores each marked item once at the caching node of its cell. Throws
// DataError when a marked cell is not in the topology.
Placement place(const CacheWorthySet& cws, const Topology& topology, Architecture arch);

// total_size(a) / total_size(CORE). Throws std::invalid_argument when the
// CORE placement is missing or empty.
std::map<Architecture, double> price_of_fog(const std::map<Architecture, Placement>& placements);

enum class DistanceWeighting { kPerRequest, kPerItem };

// Mean distance between each marked pair's caching node and its base
// station, weighted by requests or uniformly per pair. Throws
// std::invalid_argument for an empty cache-worthy set.
double mean_data_distance(const CacheWorthySet& cws, const Placement& placement,
                          const Topology& topology,
                          DistanceWeighting weighting = DistanceWeighting::kPerRequest);

// Per-node cache sizes, ascending.
std::vector<std::size_t> size_distribution(const Placement& placement);

struct ArchitectureMetrics {
  Architecture arch = Architecture::kCore;
  std::size_t total_size = 0;
  double price_of_fog = 1.0;
  double mean_distance_km = 0.0;
  // Mean bytes per distinct cached copy; reporting only.
  double mean_bytes_per_item = 0.0;
  std::vector<std::pair<std::string, std::size_t>> node_sizes;  // by node id
};

struct MetricsReport {
  std::string op;
  double target_hit_ratio = 0.0;
  double achieved_hit_ratio = 0.0;
  std::size_t cache_worthy_pairs = 0;
  std::array<ArchitectureMetrics, 4> per_arch;  // indexed by Architecture

  const ArchitectureMetrics& at(Architecture a) const {
    return per_arch[static_cast<std::size_t>(a)];
  }
};

// Steps one to six for all four architectures over a common cache-worthy set.
MetricsReport evaluate(const DemandMatrix& demand, const Topology& topology, double target,
                       DistanceWeighting weighting = DistanceWeighting::kPerRequest);

}  // namespace fogcache
