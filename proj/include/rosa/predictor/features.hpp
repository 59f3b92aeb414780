#pragma once

#include <array>
#include <string>
#include <string_view>

#include "rosa/data/agent.hpp"
#include "rosa/data/roundabout.hpp"

namespace rosa {

enum class FeatureVariant { PositionType = 1, Dynamics = 2, DynamicsExit = 3 };

std::string_view to_string(FeatureVariant v);
/// Accepts "position", "dynamics", "dynamics-exit" or "1"/"2"/"3".
FeatureVariant parse_variant(std::string_view name);

/// Input layout per token: [c, px, py] then, from Dynamics on,
/// [v, a_tan, a_lat, sin, cos], then for DynamicsExit a one-hot exit over
/// {-1, arm 0, ..., arm num_arms-1}.
struct FeatureConfig {
  FeatureVariant variant = FeatureVariant::Dynamics;
  int num_arms = 4;

  int input_width() const;
  bool has_dynamics() const { return variant != FeatureVariant::PositionType; }
};

inline constexpr int kOutputWidth = 7;
using TargetVector = std::array<double, kOutputWidth>;

/// Affine map of the scene box onto [-1, 1]^2 plus kinematic scales.
struct Normalizer {
  Vec2 center;
  double half_x = 100.0;
  double half_y = 100.0;
  double v_max = 15.0;
  double a_max = 5.0;

  static Normalizer from_geometry(const RoundaboutGeometry& geo, double v_max = 15.0,
                                  double a_max = 5.0);
  /// Throws DegenerateBounds.
  void validate() const;

  Vec2 normalize_position(Vec2 p) const;
  Vec2 denormalize_position(Vec2 q) const;
  /// [px, py, v, a_tan, a_lat, sin, cos] in normalized units.
  TargetVector normalize_state(const AgentState& s) const;
  /// Inverse of normalize_state for the kinematic fields; id, class and
  /// exit are copied from `carry`.
  AgentState denormalize_state(const TargetVector& r, const AgentState& carry) const;
};

void encode_features(const AgentState& s, const FeatureConfig& fc, const Normalizer& norm,
                     double* out);

}  // namespace rosa
