#include "fogcache/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

namespace fogcache {

namespace {

double cross(const PlanarPoint& o, const PlanarPoint& a, const PlanarPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

GeoPoint mean_position(std::span<const GeoPoint> pts) {
  double lat = 0.0;
  double lon = 0.0;
  for (const auto& p : pts) {
    lat += p.lat;
    lon += p.lon;
  }
  const auto n = static_cast<double>(pts.size());
  return {lat / n, lon / n};
}

}  // namespace

std::vector<PlanarPoint> convex_hull(std::vector<PlanarPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const PlanarPoint& a, const PlanarPoint& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const PlanarPoint& a, const PlanarPoint& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  // Andrew's monotone chain.
  std::vector<PlanarPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

HullGeometry hull_geometry(std::span<const PlanarPoint> points) {
  HullGeometry g;
  if (points.empty()) return g;
  const auto hull = convex_hull({points.begin(), points.end()});
  double twice_area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  if (hull.size() >= 3) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const auto& p = hull[i];
      const auto& q = hull[(i + 1) % hull.size()];
      const double c = p.x * q.y - q.x * p.y;
      twice_area += c;
      cx += (p.x + q.x) * c;
      cy += (p.y + q.y) * c;
    }
  }
  if (hull.size() >= 3 && twice_area > 0.0) {
    g.area = twice_area / 2.0;
    g.centroid = {cx / (3.0 * twice_area), cy / (3.0 * twice_area)};
    g.degenerate = false;
    return g;
  }
  for (const auto& p : points) {
    g.centroid.x += p.x;
    g.centroid.y += p.y;
  }
  g.centroid.x /= static_cast<double>(points.size());
  g.centroid.y /= static_cast<double>(points.size());
  return g;
}

std::vector<CellSite> estimate_cell_sites(const Trace& trace, std::string_view op) {
  std::map<std::string, std::vector<GeoPoint>> fixes;
  for (const auto& r : trace.records()) {
    if (r.op == op && !r.cell_id.empty()) fixes[r.cell_id].push_back(r.position);
  }
  if (fixes.empty()) {
    throw DataError(fmt::format("operator '{}' has no cellular records in the trace", op));
  }
  std::vector<CellSite> sites;
  sites.reserve(fixes.size());
  for (const auto& [cell, pts] : fixes) {
    const auto proj = LocalProjection::about_mean(pts);
    std::vector<PlanarPoint> planar;
    planar.reserve(pts.size());
    for (const auto& p : pts) planar.push_back(proj.to_plane(p));
    const auto g = hull_geometry(planar);
    CellSite s;
    s.op = std::string(op);
    s.cell_id = cell;
    s.position = g.degenerate ? mean_position(pts) : proj.to_geo(g.centroid);
    s.coverage_area_km2 = g.area;
    s.n_fixes = pts.size();
    sites.push_back(std::move(s));
  }
  return sites;
}

std::string_view to_string(Level l) {
  switch (l) {
    case Level::kBaseStation: return "base_station";
    case Level::kRing: return "ring";
    case Level::kPod: return "pod";
    case Level::kCore: return "core";
  }
  return "core";
}

std::optional<Level> parse_level(std::string_view s) {
  for (auto l : kAllLevels) {
    if (to_string(l) == s) return l;
  }
  return std::nullopt;
}

std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order) {
  const std::uint64_t n = 1ULL << order;
  std::uint64_t d = 0;
  std::uint64_t ux = x;
  std::uint64_t uy = y;
  for (std::uint64_t s = n / 2; s > 0; s /= 2) {
    const std::uint64_t rx = (ux & s) > 0 ? 1 : 0;
    const std::uint64_t ry = (uy & s) > 0 ? 1 : 0;
    d += s * s * ((3 * rx) ^ ry);
    // rotate the quadrant
    if (ry == 0) {
      if (rx == 1) {
        ux = n - 1 - ux;
        uy = n - 1 - uy;
      }
      std::swap(ux, uy);
    }
  }
  return d;
}

std::string base_station_node_id(std::string_view cell_id) { return fmt::format("bs:{}", cell_id); }

Topology Topology::from_nodes(std::string op, std::vector<TopologyNode> nodes) {
  Topology t;
  t.op_ = std::move(op);
  t.nodes_ = std::move(nodes);
  auto fail = [&](const std::string& what) {
    throw DataError(fmt::format("topology '{}': {}", t.op_, what));
  };
  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    if (!t.by_id_.emplace(t.nodes_[i].id, i).second) fail("duplicate node id " + t.nodes_[i].id);
  }
  std::size_t cores = 0;
  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    const auto& n = t.nodes_[i];
    if (!is_valid(n.position)) fail("node " + n.id + " has an invalid position");
    if (n.level == Level::kCore) {
      ++cores;
      t.core_ = i;
      if (n.parent) fail("core node " + n.id + " has a parent");
    } else {
      if (!n.parent) fail("node " + n.id + " has no parent");
      auto it = t.by_id_.find(*n.parent);
      if (it == t.by_id_.end()) fail("node " + n.id + " has unknown parent " + *n.parent);
      const auto& p = t.nodes_[it->second];
      if (static_cast<int>(p.level) != static_cast<int>(n.level) + 1) {
        fail("node " + n.id + " has a parent at the wrong level");
      }
      if (std::find(p.children.begin(), p.children.end(), n.id) == p.children.end()) {
        fail("parent " + p.id + " does not list child " + n.id);
      }
    }
    if (n.level == Level::kBaseStation && !n.children.empty()) {
      fail("base station " + n.id + " has children");
    }
    if (n.level != Level::kBaseStation && n.children.empty()) {
      fail("node " + n.id + " has no children");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& c : n.children) {
      if (!seen.insert(c).second) fail("node " + n.id + " lists child " + c + " twice");
      auto it = t.by_id_.find(c);
      if (it == t.by_id_.end()) fail("node " + n.id + " has unknown child " + c);
      const auto& child = t.nodes_[it->second];
      if (!child.parent || *child.parent != n.id) {
        fail("child " + c + " does not point back to " + n.id);
      }
    }
  }
  if (cores != 1) fail(fmt::format("expected exactly one core node, found {}", cores));
  // With consistent links and strict level increase, every node reaches the
  // single core and the graph is a tree.
  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    const auto& n = t.nodes_[i];
    if (n.level != Level::kBaseStation) continue;
    if (!n.id.starts_with("bs:")) fail("base station id " + n.id + " must start with 'bs:'");
    std::string cell = n.id.substr(3);
    std::array<std::size_t, 4> anc{};
    anc[0] = i;
    std::size_t cur = i;
    for (int lvl = 1; lvl < 4; ++lvl) {
      cur = t.by_id_.at(*t.nodes_[cur].parent);
      anc[static_cast<std::size_t>(lvl)] = cur;
    }
    t.ancestors_.emplace(i, anc);
    t.cell_ids_.emplace(i, cell);
    t.by_cell_.emplace(std::move(cell), i);
  }
  if (t.by_cell_.empty()) fail("no base stations");
  return t;
}

std::size_t Topology::index_of(std::string_view node_id) const {
  auto it = by_id_.find(std::string(node_id));
  if (it == by_id_.end()) throw std::out_of_range(fmt::format("unknown topology node '{}'", node_id));
  return it->second;
}

std::size_t Topology::base_station_index(std::string_view cell_id) const {
  auto it = by_cell_.find(std::string(cell_id));
  if (it == by_cell_.end()) {
    throw std::out_of_range(fmt::format("cell '{}' is not in topology '{}'", cell_id, op_));
  }
  return it->second;
}

bool Topology::has_cell(std::string_view cell_id) const {
  return by_cell_.contains(std::string(cell_id));
}

std::size_t Topology::ancestor_at(std::size_t bs_index, Level level) const {
  return ancestors_.at(bs_index)[static_cast<std::size_t>(level)];
}

std::vector<std::size_t> Topology::nodes_at(Level level) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].level == level) out.push_back(i);
  }
  return out;
}

Topology build_topology(std::span<const CellSite> sites, std::size_t ring_size,
                        std::size_t pod_fanout) {
  if (sites.empty()) throw std::invalid_argument("build_topology: no cell sites");
  if (ring_size < 1 || pod_fanout < 1) {
    throw std::invalid_argument("build_topology: ring_size and pod_fanout must be >= 1");
  }
  const std::string& op = sites.front().op;
  std::vector<GeoPoint> positions;
  positions.reserve(sites.size());
  for (const auto& s : sites) {
    if (s.op != op) throw std::invalid_argument("build_topology: sites from several operators");
    positions.push_back(s.position);
  }

  const auto proj = LocalProjection::about_mean(positions);
  std::vector<PlanarPoint> planar;
  planar.reserve(sites.size());
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    planar.push_back(proj.to_plane(sites[i].position));
    if (i == 0) {
      min_x = max_x = planar[0].x;
      min_y = max_y = planar[0].y;
    }
    min_x = std::min(min_x, planar[i].x);
    max_x = std::max(max_x, planar[i].x);
    min_y = std::min(min_y, planar[i].y);
    max_y = std::max(max_y, planar[i].y);
  }
  const double extent = std::max({max_x - min_x, max_y - min_y, 1e-12});
  constexpr int kOrder = 16;
  constexpr double kGridMax = (1 << kOrder) - 1;
  struct Keyed {
    std::uint64_t hilbert;
    std::size_t site;
  };
  std::vector<Keyed> order;
  order.reserve(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto gx = static_cast<std::uint32_t>(std::lround((planar[i].x - min_x) / extent * kGridMax));
    const auto gy = static_cast<std::uint32_t>(std::lround((planar[i].y - min_y) / extent * kGridMax));
    order.push_back({hilbert_index(gx, gy, kOrder), i});
  }
  std::sort(order.begin(), order.end(), [&](const Keyed& a, const Keyed& b) {
    if (a.hilbert != b.hilbert) return a.hilbert < b.hilbert;
    return sites[a.site].cell_id < sites[b.site].cell_id;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (sites[order[i].site].cell_id == sites[order[i - 1].site].cell_id) {
      throw std::invalid_argument("build_topology: duplicate cell_id " + sites[order[i].site].cell_id);
    }
  }

  std::vector<TopologyNode> nodes;
  const std::size_t n_rings = (sites.size() + ring_size - 1) / ring_size;
  const std::size_t n_pods = (n_rings + pod_fanout - 1) / pod_fanout;
  const int ring_w = static_cast<int>(std::to_string(n_rings - 1).size());
  const int pod_w = static_cast<int>(std::to_string(n_pods - 1).size());

  TopologyNode core{"core", Level::kCore, {}, std::nullopt, {}};
  std::vector<GeoPoint> pod_positions;
  for (std::size_t p = 0; p < n_pods; ++p) {
    TopologyNode pod{fmt::format("pod:{:0{}d}", p, pod_w), Level::kPod, {}, core.id, {}};
    std::vector<GeoPoint> ring_positions;
    for (std::size_t r = p * pod_fanout; r < std::min(n_rings, (p + 1) * pod_fanout); ++r) {
      TopologyNode ring{fmt::format("ring:{:0{}d}", r, ring_w), Level::kRing, {}, pod.id, {}};
      std::vector<GeoPoint> bs_positions;
      for (std::size_t k = r * ring_size; k < std::min(sites.size(), (r + 1) * ring_size); ++k) {
        const auto& s = sites[order[k].site];
        TopologyNode bs{base_station_node_id(s.cell_id), Level::kBaseStation, s.position, ring.id, {}};
        ring.children.push_back(bs.id);
        bs_positions.push_back(s.position);
        nodes.push_back(std::move(bs));
      }
      ring.position = mean_position(bs_positions);
      ring_positions.push_back(ring.position);
      pod.children.push_back(ring.id);
      nodes.push_back(std::move(ring));
    }
    pod.position = mean_position(ring_positions);
    pod_positions.push_back(pod.position);
    core.children.push_back(pod.id);
    nodes.push_back(std::move(pod));
  }
  core.position = mean_position(pod_positions);
  nodes.push_back(std::move(core));
  return Topology::from_nodes(op, std::move(nodes));
}

double node_distance_km(const Topology& topology, std::string_view a, std::string_view b) {
  return haversine_km(topology.node(topology.index_of(a)).position,
                      topology.node(topology.index_of(b)).position);
}

std::string topology_to_json(const Topology& topology) {
  nlohmann::ordered_json doc;
  doc["operator"] = topology.op();
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& n : topology.nodes()) {
    nlohmann::ordered_json j;
    j["id"] = n.id;
    j["level"] = std::string(to_string(n.level));
    j["lat"] = n.position.lat;
    j["lon"] = n.position.lon;
    j["parent"] = n.parent ? nlohmann::ordered_json(*n.parent) : nlohmann::ordered_json(nullptr);
    j["children"] = n.children;
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

Topology topology_from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
    std::vector<TopologyNode> nodes;
    for (const auto& j : doc.at("nodes")) {
      TopologyNode n;
      n.id = j.at("id").get<std::string>();
      auto level = parse_level(j.at("level").get<std::string>());
      if (!level) throw DataError("topology node " + n.id + " has an unknown level");
      n.level = *level;
      n.position = {j.at("lat").get<double>(), j.at("lon").get<double>()};
      if (!j.at("parent").is_null()) n.parent = j.at("parent").get<std::string>();
      n.children = j.at("children").get<std::vector<std::string>>();
      nodes.push_back(std::move(n));
    }
    return Topology::from_nodes(doc.at("operator").get<std::string>(), std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed topology document: ") + e.what());
  }
}

}  // namespace fogcache
