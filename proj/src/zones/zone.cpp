#include "rosa/zones/zone.hpp"

#include <algorithm>
#include <cmath>

#include "rosa/error.hpp"

namespace rosa {

bool Annulus::contains(Vec2 p, double tol) const {
  const double r = (p - center).norm();
  return r >= r_inner - tol && r <= r_outer + tol;
}

double signed_area(const std::vector<Vec2>& polygon) {
  double a = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) a += polygon[i].cross(polygon[(i + 1) % n]);
  return 0.5 * a;
}

void validate_zone(const ConflictZone& zone) {
  if (zone.polygon.size() < 3)
    throw Error(ErrorCode::InvalidGeometry,
                "zone " + std::to_string(zone.id) + " has fewer than 3 vertices");
  if (std::abs(signed_area(zone.polygon)) <= 1e-12)
    throw Error(ErrorCode::InvalidGeometry, "zone " + std::to_string(zone.id) + " has zero area");
}

namespace {

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

}  // namespace

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& polygon, double tol) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[j];
    if (distance_to_segment(p, a, b) <= tol) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool point_in_zone(Vec2 p, const ConflictZone& zone) {
  return point_in_polygon(p, zone.polygon);
}

std::vector<Vec2> annular_sector(Vec2 center, double r_inner, double r_outer,
                                 double angle_from, double angle_to, int segments) {
  std::vector<Vec2> poly;
  poly.reserve(2 * (segments + 1));
  for (int k = 0; k <= segments; ++k) {
    const double a = angle_from + (angle_to - angle_from) * k / segments;
    poly.push_back(center + unit_from_angle(a) * r_outer);
  }
  for (int k = segments; k >= 0; --k) {
    const double a = angle_from + (angle_to - angle_from) * k / segments;
    poly.push_back(center + unit_from_angle(a) * r_inner);
  }
  return poly;
}

}  // namespace rosa
