#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace rosa {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a < 0.0) a += two_pi;
  a -= std::numbers::pi;
  // fmod rounding can land exactly on +pi
  if (a >= std::numbers::pi) a -= two_pi;
  return a;
}

enum class AgentClass : std::uint8_t { Vehicle = 0, VRU = 1 };

using AgentId = std::int64_t;

/// One agent at one 1 Hz timestep, in the roundabout-local planar frame.
struct AgentState {
  AgentId id = 0;
  AgentClass cls = AgentClass::Vehicle;
  Vec2 pos;
  double v = 0.0;       // m/s, >= 0
  double a_tan = 0.0;   // m/s^2
  double a_lat = 0.0;   // m/s^2
  double theta = 0.0;   // rad, [-pi, pi)
  int exit = -1;        // arm index or -1

  bool operator==(const AgentState&) const = default;
};

struct Frame {
  std::int64_t t = 0;  // seconds
  std::vector<AgentState> agents;

  const AgentState* find(AgentId id) const;
};

/// Time-indexed sequence of frames for one recording or scenario.
struct FrameSeries {
  double frequency_hz = 1.0;
  std::string geometry_id;
  std::vector<Frame> frames;

  bool empty() const { return frames.empty(); }
  std::int64_t first_time() const { return frames.front().t; }
  std::int64_t last_time() const { return frames.back().t; }
  /// Frame with timestamp t, or nullptr. Assumes unit spacing.
  const Frame* at(std::int64_t t) const;
  bool has_vru() const;
};

/// Throws InvalidSpec if timestamps are not strictly increasing or an id
/// repeats within a frame.
void validate_series(const FrameSeries& series);

}  // namespace rosa
