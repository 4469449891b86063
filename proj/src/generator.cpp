#include "fogcache/generator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "fogcache/random.hpp"

namespace fogcache {

bool BoundingBox::contains(const GeoPoint& p) const {
  return p.lat >= south_west.lat && p.lat <= north_east.lat && p.lon >= south_west.lon &&
         p.lon <= north_east.lon;
}

GeneratorConfig GeneratorConfig::defaults(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("generator scale divisor must be positive");
  }
  GeneratorConfig cfg;
  cfg.n_users = std::max(1, static_cast<int>(std::lround(kReferenceUsers / scale)));
  for (const auto& ref : kReferenceOperators) {
    cfg.operators.push_back(
        {ref.name, std::max(1, static_cast<int>(std::lround(ref.cells / scale))), 1.0});
  }
  return cfg;
}

void GeneratorConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(fmt::format("{} must be in [0, 1]", name));
  };
  if (n_users < 1) throw ConfigError("n_users must be >= 1");
  if (n_hours < 1) throw ConfigError("n_hours must be >= 1");
  if (!start_day.ok()) throw ConfigError("start_day is not a valid date");
  if (operators.empty()) throw ConfigError("at least one operator is required");
  double weight_sum = 0.0;
  for (const auto& op : operators) {
    if (op.name.empty()) throw ConfigError("operator name must be non-empty");
    if (op.cells < 1) throw ConfigError(fmt::format("operator {}: cell count must be >= 1", op.name));
    if (!(op.user_weight >= 0.0)) {
      throw ConfigError(fmt::format("operator {}: user_weight must be >= 0", op.name));
    }
    weight_sum += op.user_weight;
  }
  if (!(weight_sum > 0.0)) throw ConfigError("operator user weights must not all be zero");
  prob(static_fraction, "static_fraction");
  prob(active_probability, "active_probability");
  prob(vehicular_base, "vehicular_base");
  prob(cellular_probability_vehicular, "cellular_probability_vehicular");
  prob(cellular_probability_other, "cellular_probability_other");
  prob(lte_share, "lte_share");
  for (int h : peak_hours) {
    if (h < 0 || h > 23) throw ConfigError("peak hours must be in [0, 23]");
  }
  for (double a : peak_amplitudes) {
    if (!(a >= 0.0)) throw ConfigError("peak amplitudes must be >= 0");
  }
  if (!(peak_width_hours > 0.0)) throw ConfigError("peak_width_hours must be > 0");
  for (int h = 0; h < 24; ++h) {
    if (vehicular_probability(*this, h) > 1.0) {
      throw ConfigError("vehicular base plus peak amplitudes exceeds 1");
    }
  }
  double share_sum = 0.0;
  for (double s : category_shares) {
    if (!(s >= 0.0)) throw ConfigError("category shares must be >= 0");
    share_sum += s;
  }
  if (std::abs(share_sum - 1.0) > 1e-9) {
    throw ConfigError(fmt::format("category shares sum to {}, expected 1", share_sum));
  }
  if (max_apps_per_hour < 1) throw ConfigError("max_apps_per_hour must be >= 1");
  if (!(session_bytes_median > 0.0)) throw ConfigError("session_bytes_median must be > 0");
  if (!(session_bytes_sigma >= 0.0)) throw ConfigError("session_bytes_sigma must be >= 0");
  if (!(upload_ratio >= 0.0)) throw ConfigError("upload_ratio must be >= 0");
  if (!(gps_jitter_m >= 0.0)) throw ConfigError("gps_jitter_m must be >= 0");
  if (!is_valid(bbox.south_west) || !is_valid(bbox.north_east) ||
      !(bbox.south_west.lat < bbox.north_east.lat) ||
      !(bbox.south_west.lon < bbox.north_east.lon)) {
    throw ConfigError("bounding box must have south_west strictly below-left of north_east");
  }
}

double vehicular_probability(const GeneratorConfig& cfg, int hour_of_day) {
  double p = cfg.vehicular_base;
  for (std::size_t i = 0; i < cfg.peak_hours.size(); ++i) {
    int d = std::abs(hour_of_day - cfg.peak_hours[i]) % 24;
    d = std::min(d, 24 - d);
    p += cfg.peak_amplitudes[i] *
         std::exp(-static_cast<double>(d * d) / (2.0 * cfg.peak_width_hours * cfg.peak_width_hours));
  }
  return p;
}

const std::vector<std::string>& generator_apps(ContentCategory c) {
  static const std::array<std::vector<std::string>, kNumCategories> apps = {{
      {"COM.GOOGLE.ANDROID.YOUTUBE", "COM.GOOGLE.ANDROID.APPS.YOUTUBE.KIDS"},
      {"COM.NETFLIX.MEDIACLIENT", "COM.TWC.TV", "COM.SHOWTIME.STANDALONE"},
      {"TV.PERISCOPE.ANDROID", "COM.DIRECTV.DTVE"},
      {"ORG.VIDEOLAN.VLC", "COM.HTC.VIDEO"},
      {"COM.WEATHER.WEATHER"},
      {"COM.GOOGLE.ANDROID.APPS.MAPS"},
      {"COM.CNN.MOBILE.ANDROID.PHONE", "COM.NBCUNIVERSAL.NBCNEWS"},
      {"COM.GOTV.NFLGAMECENTER.US.LITE", "COM.FOXSPORTS.ANDROID"},
      {"COM.FACEBOOK.KATANA", "COM.WHATSAPP"},
  }};
  return apps[index_of(c)];
}

namespace {

std::string cell_prefix(std::string_view op) {
  std::string p;
  for (char c : op) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      p.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return p.empty() ? "op" : p;
}

GeoPoint uniform_in(const BoundingBox& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lat(box.south_west.lat, box.north_east.lat);
  std::uniform_real_distribution<double> lon(box.south_west.lon, box.north_east.lon);
  const double la = lat(rng);
  return {la, lon(rng)};
}

// Uniform grid over projected site positions for nearest-site queries.
class NearestSiteIndex {
 public:
  NearestSiteIndex(const std::vector<GeneratedCell>& cells, const LocalProjection& proj)
      : proj_(proj) {
    pts_.reserve(cells.size());
    for (const auto& c : cells) pts_.push_back(proj_.to_plane(c.position));
    min_x_ = max_x_ = pts_.front().x;
    min_y_ = max_y_ = pts_.front().y;
    for (const auto& p : pts_) {
      min_x_ = std::min(min_x_, p.x);
      max_x_ = std::max(max_x_, p.x);
      min_y_ = std::min(min_y_, p.y);
      max_y_ = std::max(max_y_, p.y);
    }
    side_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(pts_.size()) / 2.0)));
    cell_w_ = std::max((max_x_ - min_x_) / side_, 1e-9);
    cell_h_ = std::max((max_y_ - min_y_) / side_, 1e-9);
    buckets_.resize(static_cast<std::size_t>(side_ * side_));
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      auto [bx, by] = bucket_of(pts_[i]);
      buckets_[static_cast<std::size_t>(by * side_ + bx)].push_back(i);
    }
  }

  std::size_t nearest(const GeoPoint& g) const {
    const PlanarPoint q = proj_.to_plane(g);
    auto [bx, by] = bucket_of(q);
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring <= side_; ++ring) {
      for (int y = by - ring; y <= by + ring; ++y) {
        for (int x = bx - ring; x <= bx + ring; ++x) {
          if (x < 0 || y < 0 || x >= side_ || y >= side_) continue;
          if (std::max(std::abs(x - bx), std::abs(y - by)) != ring) continue;
          for (std::size_t i : buckets_[static_cast<std::size_t>(y * side_ + x)]) {
            const double dx = pts_[i].x - q.x;
            const double dy = pts_[i].y - q.y;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
              best_d2 = d2;
              best = i;
            }
          }
        }
      }
      // Everything outside the searched square is at least this far away.
      const double reach = ring * std::min(cell_w_, cell_h_);
      if (std::isfinite(best_d2) && reach * reach >= best_d2) break;
    }
    return best;
  }

 private:
  std::pair<int, int> bucket_of(const PlanarPoint& p) const {
    int bx = static_cast<int>(std::floor((p.x - min_x_) / cell_w_));
    int by = static_cast<int>(std::floor((p.y - min_y_) / cell_h_));
    return {std::clamp(bx, 0, side_ - 1), std::clamp(by, 0, side_ - 1)};
  }

  LocalProjection proj_;
  std::vector<PlanarPoint> pts_;
  std::vector<std::vector<std::size_t>> buckets_;
  double min_x_ = 0, max_x_ = 0, min_y_ = 0, max_y_ = 0;
  double cell_w_ = 1, cell_h_ = 1;
  int side_ = 1;
};

struct AppSession {
  std::string_view app;
  std::uint64_t bytes = 0;
};

}  // namespace

std::vector<GeneratedCell> generate_deployment(const GeneratorConfig& cfg,
                                               const OperatorDeployment& op,
                                               std::size_t op_index) {
  std::mt19937_64 rng(mix64(cfg.seed ^ fnv1a64("deployment")) ^ mix64(op_index + 1));
  std::vector<GeneratedCell> cells;
  cells.reserve(static_cast<std::size_t>(op.cells));
  const auto prefix = cell_prefix(op.name);
  for (int i = 0; i < op.cells; ++i) {
    cells.push_back({fmt::format("{}-{:05d}", prefix, i), uniform_in(cfg.bbox, rng)});
  }
  return cells;
}

Trace generate_trace(const GeneratorConfig& cfg) {
  cfg.validate();
  const GeoPoint center{(cfg.bbox.south_west.lat + cfg.bbox.north_east.lat) / 2.0,
                        (cfg.bbox.south_west.lon + cfg.bbox.north_east.lon) / 2.0};
  const LocalProjection proj(center);
  const double box_w = proj.to_plane(GeoPoint{center.lat, cfg.bbox.north_east.lon}).x * 2.0;
  const double box_h = proj.to_plane(GeoPoint{cfg.bbox.north_east.lat, center.lon}).y * 2.0;
  // Any segment this short that heads for the centre stays inside the box.
  const double max_segment_km = 0.45 * std::min(box_w, box_h);

  std::vector<std::vector<GeneratedCell>> deployments;
  std::vector<NearestSiteIndex> indexes;
  std::vector<double> op_weights;
  for (std::size_t i = 0; i < cfg.operators.size(); ++i) {
    deployments.push_back(generate_deployment(cfg, cfg.operators[i], i));
    op_weights.push_back(cfg.operators[i].user_weight);
  }
  for (const auto& d : deployments) indexes.emplace_back(d, proj);

  const int id_width = static_cast<int>(std::to_string(cfg.n_users - 1).size());
  struct Timed {
    int hour_index;
    TraceRecord record;
  };
  std::vector<Timed> out;

  std::discrete_distribution<std::size_t> pick_category(cfg.category_shares.begin(),
                                                        cfg.category_shares.end());
  std::discrete_distribution<std::size_t> pick_operator(op_weights.begin(), op_weights.end());
  std::lognormal_distribution<double> session_bytes(std::log(cfg.session_bytes_median),
                                                    cfg.session_bytes_sigma);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> n_apps(1, cfg.max_apps_per_hour);

  for (int u = 0; u < cfg.n_users; ++u) {
    std::mt19937_64 rng(mix64(cfg.seed ^ fnv1a64("user")) ^ mix64(static_cast<std::uint64_t>(u) + 1));
    const std::string user_id = fmt::format("u{:0{}d}", u, id_width);
    const std::size_t op_index = pick_operator(rng);
    const auto& op_name = cfg.operators[op_index].name;
    const GeoPoint home = uniform_in(cfg.bbox, rng);
    const bool is_static = unit(rng) < cfg.static_fraction;
    GeoPoint current = home;
    session_bytes.reset();

    for (int h = 0; h < cfg.n_hours; ++h) {
      if (!(unit(rng) < cfg.active_probability)) continue;
      const int hour_of_day = h % 24;
      const Day day{std::chrono::sys_days(cfg.start_day) + std::chrono::days(h / 24)};

      std::vector<GeoPoint> fixes;
      bool vehicular = false;
      if (is_static) {
        const double r_km = cfg.gps_jitter_m / 1000.0 * std::sqrt(unit(rng));
        fixes.push_back(destination(home, unit(rng) * 2.0 * std::numbers::pi, r_km));
      } else {
        vehicular = unit(rng) < vehicular_probability(cfg, hour_of_day);
        // (0, 5] km pedestrian, (5, 60] km vehicular; the epsilon keeps the
        // realised great-circle sum on the intended side of the 5 km cut.
        const double x = 1.0 - unit(rng);
        double km = vehicular ? 5.0 + 55.0 * x : 5.0 * x;
        km = vehicular ? std::max(km, 5.0 + 1e-6) : std::min(km, 5.0 - 1e-6);
        int segments = vehicular ? std::uniform_int_distribution<int>(2, 4)(rng)
                                 : std::uniform_int_distribution<int>(1, 2)(rng);
        segments = std::max(segments, static_cast<int>(std::ceil(km / max_segment_km)));
        const double seg_km = km / segments;
        fixes.push_back(current);
        for (int s = 0; s < segments; ++s) {
          GeoPoint next{};
          bool placed = false;
          for (int attempt = 0; attempt < 16 && !placed; ++attempt) {
            next = destination(current, unit(rng) * 2.0 * std::numbers::pi, seg_km);
            placed = cfg.bbox.contains(next);
          }
          if (!placed) {
            const PlanarPoint c = proj.to_plane(current);
            const double bearing = std::atan2(-c.x, -c.y);
            next = destination(current, bearing, seg_km);
          }
          fixes.push_back(next);
          current = next;
        }
      }

      const double cellular_p =
          vehicular ? cfg.cellular_probability_vehicular : cfg.cellular_probability_other;
      Technology tech = Technology::kWifi;
      if (unit(rng) < cellular_p) {
        tech = unit(rng) < cfg.lte_share ? Technology::kLte : Technology::k3G;
      }

      std::vector<AppSession> sessions;
      const int k = n_apps(rng);
      for (int a = 0; a < k; ++a) {
        const auto cat = static_cast<ContentCategory>(pick_category(rng));
        const auto& apps = generator_apps(cat);
        const auto& app = apps[std::uniform_int_distribution<std::size_t>(0, apps.size() - 1)(rng)];
        const auto bytes = static_cast<std::uint64_t>(std::llround(session_bytes(rng)));
        auto it = std::find_if(sessions.begin(), sessions.end(),
                               [&](const AppSession& s) { return s.app == app; });
        if (it != sessions.end()) {
          it->bytes += bytes;
        } else {
          sessions.push_back({app, bytes});
        }
      }

      const auto n_fix = static_cast<std::uint64_t>(fixes.size());
      for (std::size_t f = 0; f < fixes.size(); ++f) {
        std::string cell;
        if (is_cellular(tech)) {
          cell = deployments[op_index][indexes[op_index].nearest(fixes[f])].cell_id;
        }
        for (const auto& s : sessions) {
          std::uint64_t bytes = s.bytes / n_fix;
          if (f + 1 == fixes.size()) bytes += s.bytes % n_fix;
          TraceRecord r;
          r.day = day;
          r.hour = hour_of_day;
          r.user_id = user_id;
          r.position = fixes[f];
          r.op = is_cellular(tech) ? op_name : std::string{};
          r.cell_id = cell;
          r.tech = tech;
          r.app_class = std::string(s.app);
          r.bytes_down = bytes;
          r.bytes_up = static_cast<std::uint64_t>(std::llround(static_cast<double>(bytes) * cfg.upload_ratio));
          out.push_back({h, std::move(r)});
        }
      }
    }
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const Timed& a, const Timed& b) { return a.hour_index < b.hour_index; });
  std::vector<TraceRecord> records;
  records.reserve(out.size());
  for (auto& t : out) records.push_back(std::move(t.record));
  return Trace(std::move(records));
}

}  // namespace fogcache
