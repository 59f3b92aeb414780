#include "rosa/data/roundabout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rosa/error.hpp"

namespace rosa {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double angular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace

const Arm& RoundaboutGeometry::arm(int arm_id) const {
  for (const auto& a : arms)
    if (a.id == arm_id) return a;
  throw Error(ErrorCode::InvalidGeometry, "unknown arm " + std::to_string(arm_id));
}

const ConflictZone& RoundaboutGeometry::zone(int zone_id) const {
  for (const auto& z : zones)
    if (z.id == zone_id) return z;
  throw Error(ErrorCode::InvalidGeometry, "unknown zone " + std::to_string(zone_id));
}

Vec2 RoundaboutGeometry::arm_axis(int arm_id) const {
  return unit_from_angle(arm(arm_id).center_angle);
}

Vec2 RoundaboutGeometry::arm_normal(int arm_id) const {
  const double a = arm(arm_id).center_angle;
  return {-std::sin(a), std::cos(a)};
}

Vec2 RoundaboutGeometry::arm_point(int arm_id, double radial, double lateral) const {
  return center + arm_axis(arm_id) * radial + arm_normal(arm_id) * lateral;
}

void build_default_layout(RoundaboutGeometry& geo, const std::vector<int>& zone_arms) {
  for (auto& a : geo.arms) {
    if (!a.approach.empty()) continue;
    a.approach = {geo.arm_point(a.id, geo.circulating_radius + geo.approach_length,
                                geo.approach_lane_offset),
                  geo.arm_point(a.id, geo.circulating_radius, geo.approach_lane_offset)};
  }
  geo.zones.clear();
  const int n = static_cast<int>(zone_arms.size());
  for (int i = 0; i < n; ++i) {
    const int arm_id = zone_arms[i];
    const double r0 = geo.circulating_radius + geo.crosswalk_offset;
    const double r1 = r0 + geo.crosswalk_depth;
    const double w = geo.crosswalk_half_width;
    ConflictZone cw;
    cw.id = i;
    cw.kind = ZoneKind::Crosswalk;
    cw.arm_id = arm_id;
    cw.polygon = {geo.arm_point(arm_id, r0, -w), geo.arm_point(arm_id, r1, -w),
                  geo.arm_point(arm_id, r1, w), geo.arm_point(arm_id, r0, w)};
    if (signed_area(cw.polygon) < 0.0) std::reverse(cw.polygon.begin(), cw.polygon.end());
    geo.zones.push_back(std::move(cw));
  }
  for (int i = 0; i < n; ++i) {
    const int arm_id = zone_arms[i];
    const double phi = geo.arm(arm_id).center_angle;
    const double r_in = geo.circulating_radius - geo.lane_width;
    ConflictZone en;
    en.id = n + i;
    en.kind = ZoneKind::Entry;
    en.arm_id = arm_id;
    en.polygon = annular_sector(geo.center, r_in, geo.circulating_radius,
                                phi - geo.entry_sector_deg * kDeg, phi);
    en.carriageway = Annulus{geo.center, r_in, geo.circulating_radius};
    geo.zones.push_back(std::move(en));
  }
}

void validate_geometry(const RoundaboutGeometry& geo) {
  if (!(geo.circulating_radius > 0.0))
    throw Error(ErrorCode::InvalidGeometry, "circulating_radius must be positive");
  if (!(geo.lane_width > 0.0) || geo.lane_width >= geo.circulating_radius)
    throw Error(ErrorCode::InvalidGeometry, "lane_width must lie in (0, circulating_radius)");
  if (geo.arms.empty()) throw Error(ErrorCode::InvalidGeometry, "geometry has no arms");
  for (std::size_t i = 0; i < geo.arms.size(); ++i)
    for (std::size_t j = i + 1; j < geo.arms.size(); ++j) {
      if (geo.arms[i].id == geo.arms[j].id)
        throw Error(ErrorCode::InvalidGeometry, "duplicate arm id");
      if (angular_distance(geo.arms[i].center_angle, geo.arms[j].center_angle) < 1e-9)
        throw Error(ErrorCode::InvalidGeometry, "arm angles must be pairwise distinct");
    }
  int crosswalks = 0, entries = 0;
  for (const auto& z : geo.zones) {
    validate_zone(z);
    (z.kind == ZoneKind::Crosswalk ? crosswalks : entries)++;
  }
  if (crosswalks != 3 || entries != 3)
    throw Error(ErrorCode::InvalidGeometry, "expected 3 crosswalk and 3 entry zones, got " +
                                                std::to_string(crosswalks) + " and " +
                                                std::to_string(entries));
}

RoundaboutGeometry parse_geometry(std::istream& in) {
  RoundaboutGeometry geo;
  std::vector<int> zone_arms = {0, 1, 2};
  std::vector<ConflictZone> explicit_zones;
  std::vector<std::pair<int, std::vector<Vec2>>> polylines;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::BadFormat, "geometry line " + std::to_string(line_no) + ": " + msg);
  };
  auto read_points = [&](std::istringstream& ss) {
    std::vector<Vec2> pts;
    double x, y;
    while (ss >> x) {
      if (!(ss >> y)) fail("odd number of coordinates");
      pts.push_back({x, y});
    }
    return pts;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) fail("expected key = value");
      continue;
    }
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    std::istringstream ss(line.substr(eq + 1));
    auto number = [&]() {
      double v;
      if (!(ss >> v)) fail("expected a number for " + key);
      return v;
    };
    if (key == "id") {
      ss >> geo.id;
    } else if (key == "center") {
      geo.center.x = number();
      geo.center.y = number();
    } else if (key == "circulating_radius") {
      geo.circulating_radius = number();
    } else if (key == "lane_width") {
      geo.lane_width = number();
    } else if (key == "approach_lane_offset") {
      geo.approach_lane_offset = number();
    } else if (key == "approach_length") {
      geo.approach_length = number();
    } else if (key == "crosswalk_offset") {
      geo.crosswalk_offset = number();
    } else if (key == "crosswalk_depth") {
      geo.crosswalk_depth = number();
    } else if (key == "crosswalk_half_width") {
      geo.crosswalk_half_width = number();
    } else if (key == "entry_sector_deg") {
      geo.entry_sector_deg = number();
    } else if (key == "scene_half_extent") {
      geo.scene_half_extent = number();
    } else if (key == "arm") {
      Arm a;
      a.id = static_cast<int>(number());
      a.center_angle = wrap_angle(number() * kDeg);
      geo.arms.push_back(a);
    } else if (key == "arm_polyline") {
      const int id = static_cast<int>(number());
      polylines.emplace_back(id, read_points(ss));
    } else if (key == "zone_arms") {
      zone_arms.clear();
      int a;
      while (ss >> a) zone_arms.push_back(a);
    } else if (key == "zone") {
      ConflictZone z;
      std::string kind;
      z.id = static_cast<int>(number());
      ss >> kind;
      if (kind == "crosswalk") {
        z.kind = ZoneKind::Crosswalk;
      } else if (kind == "entry") {
        z.kind = ZoneKind::Entry;
      } else {
        fail("zone kind must be crosswalk or entry");
      }
      z.arm_id = static_cast<int>(number());
      z.polygon = read_points(ss);
      explicit_zones.push_back(std::move(z));
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  std::sort(geo.arms.begin(), geo.arms.end(), [](const Arm& a, const Arm& b) { return a.id < b.id; });
  for (auto& [id, pts] : polylines) {
    for (auto& a : geo.arms)
      if (a.id == id) a.approach = pts;
  }
  build_default_layout(geo, zone_arms);
  if (!explicit_zones.empty()) {
    for (auto& z : explicit_zones)
      if (z.kind == ZoneKind::Entry)
        z.carriageway = Annulus{geo.center, geo.circulating_radius - geo.lane_width,
                                geo.circulating_radius};
    geo.zones = std::move(explicit_zones);
  }
  validate_geometry(geo);
  return geo;
}

RoundaboutGeometry load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open geometry file " + path.string());
  return parse_geometry(in);
}

void write_geometry(std::ostream& out, const RoundaboutGeometry& geo) {
  out << std::setprecision(17);
  out << "id = " << geo.id << "\n"
      << "center = " << geo.center.x << " " << geo.center.y << "\n"
      << "circulating_radius = " << geo.circulating_radius << "\n"
      << "lane_width = " << geo.lane_width << "\n"
      << "approach_lane_offset = " << geo.approach_lane_offset << "\n"
      << "approach_length = " << geo.approach_length << "\n"
      << "crosswalk_offset = " << geo.crosswalk_offset << "\n"
      << "crosswalk_depth = " << geo.crosswalk_depth << "\n"
      << "crosswalk_half_width = " << geo.crosswalk_half_width << "\n"
      << "entry_sector_deg = " << geo.entry_sector_deg << "\n"
      << "scene_half_extent = " << geo.scene_half_extent << "\n";
  for (const auto& a : geo.arms) {
    out << "arm = " << a.id << " " << a.center_angle / kDeg << "\n";
    out << "arm_polyline = " << a.id;
    for (const auto& p : a.approach) out << " " << p.x << " " << p.y;
    out << "\n";
  }
  for (const auto& z : geo.zones) {
    out << "zone = " << z.id << " " << (z.kind == ZoneKind::Crosswalk ? "crosswalk" : "entry")
        << " " << z.arm_id;
    for (const auto& p : z.polygon) out << " " << p.x << " " << p.y;
    out << "\n";
  }
}

RoundaboutGeometry default_geometry() {
  RoundaboutGeometry geo;
  geo.id = "rdb-synthetic";
  for (int i = 0; i < 4; ++i) geo.arms.push_back({i, wrap_angle(i * 90.0 * kDeg), {}});
  build_default_layout(geo, {0, 1, 2});
  validate_geometry(geo);
  return geo;
}

int arm_for_bearing(const RoundaboutGeometry& geo, double bearing) {
  int best = -1;
  double best_dist = 0.0;
  for (const auto& a : geo.arms) {
    const double d = angular_distance(bearing, a.center_angle);
    // 1e-12 keeps exact boundary ties deterministic in favour of the lower id
    if (best < 0 || d < best_dist - 1e-12 || (std::abs(d - best_dist) <= 1e-12 && a.id < best)) {
      best = a.id;
      best_dist = d;
    }
  }
  return best;
}

Path::Path(std::vector<Vec2> points) : points_(std::move(points)) {
  cumulative_.reserve(points_.size());
  double s = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i > 0) s += (points_[i] - points_[i - 1]).norm();
    cumulative_.push_back(s);
  }
}

std::size_t Path::segment_for(double s) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t idx = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  return std::min(idx, points_.size() - 2);
}

Vec2 Path::position_at(double s) const {
  if (points_.size() == 1) return points_.front();
  const std::size_t i = segment_for(s);
  const double seg = cumulative_[i + 1] - cumulative_[i];
  const double t = seg > 0.0 ? (s - cumulative_[i]) / seg : 0.0;
  return points_[i] + (points_[i + 1] - points_[i]) * t;
}

double Path::heading_at(double s) const {
  const std::size_t i = segment_for(s);
  const Vec2 d = points_[i + 1] - points_[i];
  return wrap_angle(std::atan2(d.y, d.x));
}

double Path::project(Vec2 p) const {
  double best_s = 0.0, best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2 ab = points_[i + 1] - points_[i];
    const double len2 = ab.dot(ab);
    const double t = len2 > 0.0 ? std::clamp((p - points_[i]).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double d = (p - (points_[i] + ab * t)).norm();
    if (d < best_d) {
      best_d = d;
      best_s = cumulative_[i] + t * std::sqrt(len2);
    }
  }
  return best_s;
}

Path vehicle_route(const RoundaboutGeometry& geo, int entry_arm, int exit_arm, double exit_radial) {
  std::vector<Vec2> pts = geo.arm(entry_arm).approach;
  const double ring = geo.ring_radius();
  const double delta = std::atan2(geo.approach_lane_offset, ring);
  const double a0 = geo.arm(entry_arm).center_angle + delta;
  double a1 = geo.arm(exit_arm).center_angle - delta;
  while (a1 <= a0 + 1e-6) a1 += 2.0 * std::numbers::pi;
  const int steps = std::max(2, static_cast<int>(std::ceil((a1 - a0) / (2.0 * kDeg))));
  for (int k = 0; k <= steps; ++k) {
    const double a = a0 + (a1 - a0) * k / steps;
    pts.push_back(geo.center + unit_from_angle(a) * ring);
  }
  pts.push_back(geo.arm_point(exit_arm, geo.circulating_radius, -geo.approach_lane_offset));
  pts.push_back(geo.arm_point(exit_arm, exit_radial, -geo.approach_lane_offset));
  return Path(std::move(pts));
}

double entry_line_arc_length(const RoundaboutGeometry& geo, int entry_arm) {
  return Path(geo.arm(entry_arm).approach).length();
}

}  // namespace rosa
