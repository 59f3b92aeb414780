#include "rosa/predictor/rollout.hpp"

#include <algorithm>
#include <cmath>

#include "rosa/error.hpp"
#include "rosa/predictor/samples.hpp"

namespace rosa {

std::vector<Frame> AutoregressivePredictor::rollout(const std::vector<Frame>& history, int m) const {
  if (history.empty()) throw Error(ErrorCode::WindowTooShort, "empty history");
  if (m < 1) throw Error(ErrorCode::HorizonMismatch, "horizon must be >= 1");
  const std::size_t first = history.size() > static_cast<std::size_t>(history_frames_)
                                ? history.size() - static_cast<std::size_t>(history_frames_)
                                : 0;
  const Frame& current = history.back();
  std::vector<std::vector<AgentState>> hist;
  hist.reserve(current.agents.size());
  for (const auto& a : current.agents) {
    std::vector<AgentState> h;
    for (std::size_t f = first; f < history.size(); ++f)
      if (const AgentState* s = history[f].find(a.id)) h.push_back(*s);
    // back-fill from the earliest observation
    const std::size_t want = history.size() - first;
    h.insert(h.begin(), want - h.size(), h.front());
    hist.push_back(std::move(h));
  }

  std::vector<Frame> out;
  for (int k = 1; k <= m; ++k) {
    Frame f;
    f.t = current.t + k;
    if (!hist.empty()) {
      f.agents = predict_next(hist);
      for (std::size_t i = 0; i < hist.size(); ++i) hist[i].push_back(f.agents[i]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<AgentState> ConstantVelocityPredictor::predict_next(
    const std::vector<std::vector<AgentState>>& histories) const {
  std::vector<AgentState> next;
  next.reserve(histories.size());
  for (const auto& h : histories) {
    AgentState s = h.back();
    s.pos = s.pos + unit_from_angle(s.theta) * s.v;
    s.a_tan = 0.0;
    s.a_lat = 0.0;
    next.push_back(s);
  }
  return next;
}

TransformerPredictor::TransformerPredictor(std::shared_ptr<const ModelParameters> params)
    : AutoregressivePredictor(params->config().history + 1), params_(std::move(params)) {}

std::string TransformerPredictor::name() const {
  return "transformer-" + std::string(to_string(params_->config().features.variant));
}

std::vector<AgentState> TransformerPredictor::predict_next(
    const std::vector<std::vector<AgentState>>& histories) const {
  const ModelConfig& c = params_->config();
  std::vector<AgentState> next(histories.size());
  const std::size_t chunk = static_cast<std::size_t>(c.max_agents);
  for (std::size_t start = 0; start < histories.size(); start += chunk) {
    const std::size_t end = std::min(histories.size(), start + chunk);
    std::vector<std::vector<AgentState>> part(histories.begin() + static_cast<std::ptrdiff_t>(start),
                                              histories.begin() + static_cast<std::ptrdiff_t>(end));
    const auto out = forward(*params_, make_window(part, c));
    for (std::size_t i = 0; i < part.size(); ++i) {
      TargetVector r;
      for (int k = 0; k < kOutputWidth; ++k) r[static_cast<std::size_t>(k)] = out(static_cast<Eigen::Index>(i), k);
      const AgentState& prev = part[i].back();
      AgentState s = c.norm.denormalize_state(r, prev);
      if (!c.features.has_dynamics()) {
        // only positions are learned; kinematics follow from the displacement
        const Vec2 d = s.pos - prev.pos;
        s.v = d.norm();
        s.theta = s.v > 1e-6 ? wrap_angle(std::atan2(d.y, d.x)) : prev.theta;
        s.a_tan = s.v - prev.v;
        s.a_lat = s.v * wrap_angle(s.theta - prev.theta);
      }
      next[start + i] = s;
    }
  }
  return next;
}

std::vector<Frame> OraclePredictor::rollout(const std::vector<Frame>& history, int m) const {
  if (history.empty()) throw Error(ErrorCode::WindowTooShort, "empty history");
  std::vector<Frame> out;
  for (int k = 1; k <= m; ++k) {
    const Frame* f = truth_->at(history.back().t + k);
    if (!f) throw Error(ErrorCode::BackgroundExhausted, "no ground truth at t=" + std::to_string(history.back().t + k));
    out.push_back(*f);
  }
  return out;
}

std::vector<Frame> history_window(const FrameSeries& series, std::int64_t t, int s) {
  std::vector<Frame> out;
  for (std::int64_t u = t - s; u <= t; ++u)
    if (const Frame* f = series.at(u)) out.push_back(*f);
  return out;
}

}  // namespace rosa
