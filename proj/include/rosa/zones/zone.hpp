#pragma once

#include <optional>
#include <vector>

#include "rosa/data/agent.hpp"

namespace rosa {

enum class ZoneKind { Crosswalk, Entry };

/// Circular band of the circulating carriageway; Entry zones only count
/// vehicles whose distance to the center lies inside it.
struct Annulus {
  Vec2 center;
  double r_inner = 0.0;
  double r_outer = 0.0;

  bool contains(Vec2 p, double tol = 1e-9) const;
};

struct ConflictZone {
  int id = 0;
  ZoneKind kind = ZoneKind::Crosswalk;
  int arm_id = -1;
  std::vector<Vec2> polygon;
  std::optional<Annulus> carriageway;

  AgentClass relevant_class() const {
    return kind == ZoneKind::Crosswalk ? AgentClass::VRU : AgentClass::Vehicle;
  }
};

double signed_area(const std::vector<Vec2>& polygon);

/// Throws InvalidGeometry for fewer than 3 vertices or zero area.
void validate_zone(const ConflictZone& zone);

/// Even-odd rule; points within `tol` of an edge count as inside.
bool point_in_polygon(Vec2 p, const std::vector<Vec2>& polygon, double tol = 1e-9);

bool point_in_zone(Vec2 p, const ConflictZone& zone);

/// Counter-clockwise annular sector polygon. Angles in radians, arcs sampled
/// with `segments` chords each.
std::vector<Vec2> annular_sector(Vec2 center, double r_inner, double r_outer,
                                 double angle_from, double angle_to, int segments = 12);

}  // namespace rosa
