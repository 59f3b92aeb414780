#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rosa/data/agent.hpp"
#include "rosa/zones/zone.hpp"

namespace rosa {

struct Arm {
  int id = 0;
  double center_angle = 0.0;       // rad, bearing of the arm axis from the center
  std::vector<Vec2> approach;      // inbound lane, far end first, ends on the entry line
};

/// Single-lane roundabout with radial arms. Traffic is right-hand, so the
/// ring is driven counter-clockwise.
struct RoundaboutGeometry {
  std::string id = "roundabout";
  Vec2 center;
  double circulating_radius = 17.0;   // outer edge of the carriageway; also the entry line
  double lane_width = 5.0;            // circulating lane width
  double approach_lane_offset = 1.5;  // lateral offset of each approach lane from the arm axis
  double approach_length = 300.0;
  double crosswalk_offset = 4.0;      // gap between entry line and crosswalk
  double crosswalk_depth = 4.0;       // extent along the arm axis
  double crosswalk_half_width = 3.0;  // extent across the arm
  double entry_sector_deg = 60.0;
  double scene_half_extent = 100.0;
  std::vector<Arm> arms;
  std::vector<ConflictZone> zones;

  double ring_radius() const { return circulating_radius - 0.5 * lane_width; }
  const Arm& arm(int arm_id) const;
  const ConflictZone& zone(int zone_id) const;
  /// Unit vector along the arm axis pointing away from the center.
  Vec2 arm_axis(int arm_id) const;
  /// Unit vector perpendicular to the arm axis, pointing counter-clockwise.
  Vec2 arm_normal(int arm_id) const;
  /// Arm-local (radial distance, lateral offset) to world coordinates.
  Vec2 arm_point(int arm_id, double radial, double lateral) const;
};

/// Fills in default approach polylines and, for each arm listed in
/// `zone_arms`, one crosswalk and one entry zone. Crosswalk ids come first.
void build_default_layout(RoundaboutGeometry& geo, const std::vector<int>& zone_arms);

/// Checks circulating_radius > 0, distinct arm angles, and the zone count
/// (3 crosswalks + 3 entries). Throws InvalidGeometry.
void validate_geometry(const RoundaboutGeometry& geo);

/// Key/value text format; see README for the grammar.
RoundaboutGeometry parse_geometry(std::istream& in);
RoundaboutGeometry load_geometry(const std::filesystem::path& path);
void write_geometry(std::ostream& out, const RoundaboutGeometry& geo);

/// Standard 4-arm layout with zones on arms 0..2.
RoundaboutGeometry default_geometry();

/// Arm whose angular Voronoi cell contains `bearing`; ties go to the lower id.
int arm_for_bearing(const RoundaboutGeometry& geo, double bearing);

/// Arc-length parameterized polyline.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<Vec2> points);

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  Vec2 position_at(double s) const;
  double heading_at(double s) const;
  const std::vector<Vec2>& points() const { return points_; }
  /// Arc length of the point on the path closest to p.
  double project(Vec2 p) const;

 private:
  std::size_t segment_for(double s) const;

  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

/// Inbound approach, merge onto the ring, counter-clockwise arc and outbound
/// lane up to `exit_radial` from the center.
Path vehicle_route(const RoundaboutGeometry& geo, int entry_arm, int exit_arm,
                   double exit_radial);

/// Arc length on `vehicle_route` at which the route crosses the entry line.
double entry_line_arc_length(const RoundaboutGeometry& geo, int entry_arm);

}  // namespace rosa
