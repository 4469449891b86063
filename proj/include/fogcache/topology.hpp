#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fogcache/geo.hpp"
#include "fogcache/trace.hpp"

namespace fogcache {

// Estimated base-station location for one cell.
struct CellSite {
  std::string op;
  std::string cell_id;
  GeoPoint position;
  double coverage_area_km2 = 0.0;
  std::size_t n_fixes = 0;
};

// Convex hull of planar points (counter-clockwise, no repeated or collinear
// vertices).
std::vector<PlanarPoint> convex_hull(std::vector<PlanarPoint> points);

struct HullGeometry {
  PlanarPoint centroid;
  double area = 0.0;
  bool degenerate = true;  // fewer than three non-collinear points
};

// Area centroid of the hull polygon; arithmetic mean of the input points
// when the hull has no area.
HullGeometry hull_geometry(std::span<const PlanarPoint> points);

// One site per cell of `op` seen in the trace, ordered by cell_id.
// Throws DataError when the operator has no cellular records.
std::vector<CellSite> estimate_cell_sites(const Trace& trace, std::string_view op);

enum class Level { kBaseStation, kRing, kPod, kCore };

inline constexpr std::array<Level, 4> kAllLevels = {Level::kBaseStation, Level::kRing, Level::kPod,
                                                    Level::kCore};

std::string_view to_string(Level l);
std::optional<Level> parse_level(std::string_view s);

struct TopologyNode {
  std::string id;
  Level level = Level::kBaseStation;
  GeoPoint position;
  std::optional<std::string> parent;  // absent for the core
  std::vector<std::string> children;
};

// Hilbert index of (x, y) on a 2^order x 2^order grid.
std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order = 16);

// Per-operator backhaul tree: base stations -> rings -> pods -> one core.
class Topology {
 public:
  // Validates the tree invariants; throws DataError on violation.
  static Topology from_nodes(std::string op, std::vector<TopologyNode> nodes);

  const std::string& op() const { return op_; }
  const std::vector<TopologyNode>& nodes() const { return nodes_; }
  const TopologyNode& node(std::size_t index) const { return nodes_[index]; }

  // Throw std::out_of_range for unknown ids.
  std::size_t index_of(std::string_view node_id) const;
  std::size_t base_station_index(std::string_view cell_id) const;
  bool has_cell(std::string_view cell_id) const;

  // The node at `level` on the path from base station `bs_index` to the core.
  std::size_t ancestor_at(std::size_t bs_index, Level level) const;

  std::vector<std::size_t> nodes_at(Level level) const;
  std::size_t core_index() const { return core_; }

  // cell_id of the base station node at `bs_index`.
  const std::string& cell_of(std::size_t bs_index) const { return cell_ids_.at(bs_index); }

 private:
  std::string op_;
  std::vector<TopologyNode> nodes_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::size_t> by_cell_;
  std::unordered_map<std::size_t, std::string> cell_ids_;
  // ancestors_[i] = {self, ring, pod, core} for base station i
  std::unordered_map<std::size_t, std::array<std::size_t, 4>> ancestors_;
  std::size_t core_ = 0;
};

std::string base_station_node_id(std::string_view cell_id);

// Sites are ordered along a Hilbert curve over their projected positions
// (ties by cell_id), chunked into rings of `ring_size`, rings chunked into
// pods of `pod_fanout`, pods attached to a single core. Internal nodes sit at
// the centroid of their children. Throws std::invalid_argument on empty
// input or zero sizes.
Topology build_topology(std::span<const CellSite> sites, std::size_t ring_size = 10,
                        std::size_t pod_fanout = 10);

// Great-circle distance between two nodes; std::out_of_range for unknown ids.
double node_distance_km(const Topology& topology, std::string_view a, std::string_view b);

std::string topology_to_json(const Topology& topology);
Topology topology_from_json(std::string_view json);

}  // namespace fogcache
