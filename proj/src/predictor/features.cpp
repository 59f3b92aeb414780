#include "rosa/predictor/features.hpp"

#include <cmath>

#include "rosa/error.hpp"

namespace rosa {

std::string_view to_string(FeatureVariant v) {
  switch (v) {
    case FeatureVariant::PositionType: return "position";
    case FeatureVariant::Dynamics: return "dynamics";
    case FeatureVariant::DynamicsExit: return "dynamics-exit";
  }
  return "dynamics";
}

FeatureVariant parse_variant(std::string_view name) {
  if (name == "position" || name == "1") return FeatureVariant::PositionType;
  if (name == "dynamics" || name == "2") return FeatureVariant::Dynamics;
  if (name == "dynamics-exit" || name == "3") return FeatureVariant::DynamicsExit;
  throw Error(ErrorCode::InvalidSpec, "unknown feature variant '" + std::string(name) + "'");
}

int FeatureConfig::input_width() const {
  switch (variant) {
    case FeatureVariant::PositionType: return 3;
    case FeatureVariant::Dynamics: return 8;
    case FeatureVariant::DynamicsExit: return 8 + num_arms + 1;
  }
  return 8;
}

Normalizer Normalizer::from_geometry(const RoundaboutGeometry& geo, double v_max, double a_max) {
  Normalizer n;
  n.center = geo.center;
  n.half_x = geo.scene_half_extent;
  n.half_y = geo.scene_half_extent;
  n.v_max = v_max;
  n.a_max = a_max;
  n.validate();
  return n;
}

void Normalizer::validate() const {
  if (!(half_x > 0.0) || !(half_y > 0.0))
    throw Error(ErrorCode::DegenerateBounds, "scene bounding box has zero size");
  if (!(v_max > 0.0) || !(a_max > 0.0))
    throw Error(ErrorCode::DegenerateBounds, "kinematic bounds must be positive");
}

Vec2 Normalizer::normalize_position(Vec2 p) const {
  return {(p.x - center.x) / half_x, (p.y - center.y) / half_y};
}

Vec2 Normalizer::denormalize_position(Vec2 q) const {
  return {center.x + q.x * half_x, center.y + q.y * half_y};
}

TargetVector Normalizer::normalize_state(const AgentState& s) const {
  const Vec2 q = normalize_position(s.pos);
  return {q.x, q.y, s.v / v_max, s.a_tan / a_max, s.a_lat / a_max, std::sin(s.theta),
          std::cos(s.theta)};
}

AgentState Normalizer::denormalize_state(const TargetVector& r, const AgentState& carry) const {
  AgentState s = carry;
  s.pos = denormalize_position({r[0], r[1]});
  s.v = std::max(0.0, r[2] * v_max);
  s.a_tan = r[3] * a_max;
  s.a_lat = r[4] * a_max;
  s.theta = wrap_angle(std::atan2(r[5], r[6]));
  return s;
}

void encode_features(const AgentState& s, const FeatureConfig& fc, const Normalizer& norm,
                     double* out) {
  const TargetVector r = norm.normalize_state(s);
  out[0] = s.cls == AgentClass::VRU ? 1.0 : 0.0;
  out[1] = r[0];
  out[2] = r[1];
  if (!fc.has_dynamics()) return;
  for (int k = 2; k < kOutputWidth; ++k) out[k + 1] = r[static_cast<std::size_t>(k)];
  if (fc.variant != FeatureVariant::DynamicsExit) return;
  for (int k = 0; k <= fc.num_arms; ++k) out[8 + k] = 0.0;
  const int slot = s.exit < 0 ? 0 : s.exit + 1;
  if (slot <= fc.num_arms) out[8 + slot] = 1.0;
}

}  // namespace rosa
