#include "rosa/data/preprocess.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "rosa/error.hpp"

namespace rosa {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

FrameSeries downsample(const RawTrajectorySet& raw, double hz_in, double hz_out) {
  if (!(hz_in > 0.0) || !(hz_out > 0.0))
    throw Error(ErrorCode::IncompatibleRates, "sampling rates must be positive");
  const double ratio = hz_in / hz_out;
  const auto window = static_cast<std::int64_t>(std::llround(ratio));
  if (window < 1 || std::abs(ratio - static_cast<double>(window)) > 1e-9)
    throw Error(ErrorCode::IncompatibleRates,
                "input rate " + std::to_string(hz_in) + " Hz is not a multiple of " +
                    std::to_string(hz_out) + " Hz");

  struct Acc {
    AgentClass cls;
    double x = 0, y = 0, v = 0, at = 0, al = 0, sin_sum = 0, cos_sum = 0;
    int n = 0;
  };
  std::map<std::int64_t, std::map<AgentId, Acc>> windows;
  std::int64_t w_min = std::numeric_limits<std::int64_t>::max();
  std::int64_t w_max = std::numeric_limits<std::int64_t>::min();
  for (const auto& [id, recs] : raw.agents) {
    for (const auto& r : recs) {
      const std::int64_t w = floor_div(r.frame, window);
      w_min = std::min(w_min, w);
      w_max = std::max(w_max, w);
      auto [it, fresh] = windows[w].try_emplace(id);
      Acc& a = it->second;
      if (fresh) a.cls = r.cls;
      a.x += r.x;
      a.y += r.y;
      a.v += r.v;
      a.at += r.a_tan;
      a.al += r.a_lat;
      a.sin_sum += std::sin(r.theta);
      a.cos_sum += std::cos(r.theta);
      ++a.n;
    }
  }
  FrameSeries out;
  out.frequency_hz = hz_out;
  if (windows.empty()) return out;
  for (std::int64_t w = w_min; w <= w_max; ++w) {
    Frame f;
    f.t = w;
    if (auto it = windows.find(w); it != windows.end()) {
      for (const auto& [id, a] : it->second) {
        const double n = a.n;
        AgentState s;
        s.id = id;
        s.cls = a.cls;
        s.pos = {a.x / n, a.y / n};
        s.v = std::max(0.0, a.v / n);
        s.a_tan = a.at / n;
        s.a_lat = a.al / n;
        // sums below roundoff mean the samples cancel; heading 0 by convention
        const double sn = std::abs(a.sin_sum) < 1e-12 ? 0.0 : a.sin_sum;
        const double cs = std::abs(a.cos_sum) < 1e-12 ? 0.0 : a.cos_sum;
        s.theta = wrap_angle(std::atan2(sn, cs));
        s.exit = -1;
        f.agents.push_back(s);
      }
    }
    out.frames.push_back(std::move(f));
  }
  return out;
}

FrameSeries infer_exit_labels(const FrameSeries& series, const RoundaboutGeometry& geo) {
  std::map<AgentId, AgentState> last;
  for (const auto& f : series.frames)
    for (const auto& a : f.agents) last[a.id] = a;
  std::map<AgentId, int> label;
  for (const auto& [id, a] : last) {
    if (a.cls == AgentClass::VRU) {
      label[id] = -1;
      continue;
    }
    const Vec2 rel = a.pos - geo.center;
    if (rel.norm() < geo.circulating_radius) {
      label[id] = -1;
      continue;
    }
    label[id] = arm_for_bearing(geo, std::atan2(rel.y, rel.x));
  }
  FrameSeries out = series;
  out.geometry_id = geo.id;
  for (auto& f : out.frames)
    for (auto& a : f.agents) a.exit = label[a.id];
  return out;
}

std::vector<FrameSeries> segment_series(const FrameSeries& series, std::size_t length) {
  std::vector<FrameSeries> segments;
  if (length == 0) return segments;
  for (std::size_t start = 0; start + length <= series.frames.size(); start += length) {
    FrameSeries seg;
    seg.frequency_hz = series.frequency_hz;
    seg.geometry_id = series.geometry_id;
    seg.frames.assign(series.frames.begin() + static_cast<std::ptrdiff_t>(start),
                      series.frames.begin() + static_cast<std::ptrdiff_t>(start + length));
    segments.push_back(std::move(seg));
  }
  return segments;
}

}  // namespace rosa
