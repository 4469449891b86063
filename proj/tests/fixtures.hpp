#pragma once

#include <string>
#include <vector>

#include "fogcache/caching.hpp"
#include "fogcache/topology.hpp"
#include "fogcache/trace.hpp"

namespace fogcache::testing {

struct CellSpec {
  std::string cell_id;
  GeoPoint position;
};

// rings[i] lists cell indices; pods[j] lists ring indices. Ring and pod nodes
// sit at the centroid of their children unless positions are given.
inline Topology make_topology(const std::vector<CellSpec>& cells,
                              const std::vector<std::vector<std::size_t>>& rings,
                              const std::vector<std::vector<std::size_t>>& pods,
                              std::vector<GeoPoint> ring_positions = {}) {
  auto mean = [](const std::vector<GeoPoint>& pts) {
    GeoPoint m{0.0, 0.0};
    for (const auto& p : pts) {
      m.lat += p.lat;
      m.lon += p.lon;
    }
    m.lat /= static_cast<double>(pts.size());
    m.lon /= static_cast<double>(pts.size());
    return m;
  };
  std::vector<TopologyNode> nodes;
  std::vector<GeoPoint> ring_pos;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    std::vector<GeoPoint> pts;
    TopologyNode ring{"ring:" + std::to_string(r), Level::kRing, {}, {}, {}};
    for (const auto c : rings[r]) {
      pts.push_back(cells[c].position);
      ring.children.push_back("bs:" + cells[c].cell_id);
      nodes.push_back({"bs:" + cells[c].cell_id, Level::kBaseStation, cells[c].position,
                       ring.id, {}});
    }
    ring.position = ring_positions.empty() ? mean(pts) : ring_positions[r];
    ring_pos.push_back(ring.position);
    nodes.push_back(ring);
  }
  TopologyNode core{"core", Level::kCore, {}, std::nullopt, {}};
  std::vector<GeoPoint> pod_pos;
  for (std::size_t p = 0; p < pods.size(); ++p) {
    TopologyNode pod{"pod:" + std::to_string(p), Level::kPod, {}, std::string("core"), {}};
    std::vector<GeoPoint> pts;
    for (const auto r : pods[p]) {
      pts.push_back(ring_pos[r]);
      pod.children.push_back("ring:" + std::to_string(r));
      for (auto& n : nodes) {
        if (n.id == "ring:" + std::to_string(r)) n.parent = pod.id;
      }
    }
    pod.position = mean(pts);
    pod_pos.push_back(pod.position);
    core.children.push_back(pod.id);
    nodes.push_back(pod);
  }
  core.position = mean(pod_pos);
  nodes.push_back(core);
  return Topology::from_nodes("fixture", std::move(nodes));
}

inline ContentItem item(const std::string& id) {
  return ContentItem{id, "APP", ContentCategory::kOther, std::nullopt};
}

// Four base stations b1..b4 holding {circle, square}, {triangle}, {circle},
// {circle, triangle}; one ring per base station, pods {b1, b2} and {b3, b4}.
inline Topology four_station_topology() {
  std::vector<CellSpec> cells = {{"b1", {34.00, -118.30}},
                                 {"b2", {34.00, -118.20}},
                                 {"b3", {34.10, -118.30}},
                                 {"b4", {34.10, -118.20}}};
  return make_topology(cells, {{0}, {1}, {2}, {3}}, {{0, 1}, {2, 3}});
}

inline DemandMatrix four_station_demand() {
  DemandMatrix d;
  d.add("b1", item("circle"));
  d.add("b1", item("square"));
  d.add("b2", item("triangle"));
  d.add("b3", item("circle"));
  d.add("b4", item("circle"));
  d.add("b4", item("triangle"));
  return d;
}

inline TraceRecord record(std::string user, int hour, GeoPoint pos, std::string op = "",
                          std::string cell = "", Technology tech = Technology::kWifi,
                          std::string app = "COM.EXAMPLE.APP", std::uint64_t down = 1000) {
  TraceRecord r;
  r.day = Day{std::chrono::year(2015), std::chrono::October, std::chrono::day(1)};
  r.hour = hour;
  r.user_id = std::move(user);
  r.position = pos;
  r.op = std::move(op);
  r.cell_id = std::move(cell);
  r.tech = tech;
  r.app_class = std::move(app);
  r.bytes_down = down;
  r.bytes_up = down / 10;
  return r;
}

}  // namespace fogcache::testing
