#include "rosa/predictor/samples.hpp"

#include <algorithm>

#include "rosa/error.hpp"

namespace rosa {

SceneWindow make_window(const std::vector<std::vector<AgentState>>& histories,
                        const ModelConfig& config, const std::vector<bool>& valid) {
  SceneWindow w;
  w.agents = static_cast<int>(histories.size());
  w.length = histories.empty() ? 0 : static_cast<int>(histories.front().size());
  w.valid = valid;
  const int width = config.features.input_width();
  w.tokens = Eigen::MatrixXd::Zero(w.agents * w.length, width);
  std::vector<double> row(static_cast<std::size_t>(width));
  for (int a = 0; a < w.agents; ++a) {
    const auto& h = histories[static_cast<std::size_t>(a)];
    if (static_cast<int>(h.size()) != w.length)
      throw Error(ErrorCode::InvalidSpec, "agent histories differ in length");
    for (int l = 0; l < w.length; ++l) {
      encode_features(h[static_cast<std::size_t>(l)], config.features, config.norm, row.data());
      for (int k = 0; k < width; ++k) w.tokens(a * w.length + l, k) = row[static_cast<std::size_t>(k)];
    }
  }
  return w;
}

Eigen::MatrixXd make_targets(const std::vector<AgentState>& states, const Normalizer& norm) {
  Eigen::MatrixXd t(static_cast<Eigen::Index>(states.size()), kOutputWidth);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const TargetVector r = norm.normalize_state(states[i]);
    for (int k = 0; k < kOutputWidth; ++k) t(static_cast<Eigen::Index>(i), k) = r[static_cast<std::size_t>(k)];
  }
  return t;
}

std::vector<TrainingSample> build_samples(const FrameSeries& series, const ModelConfig& config) {
  std::vector<TrainingSample> out;
  const int s = config.history;
  if (series.frames.size() < static_cast<std::size_t>(s + 2)) return out;
  for (std::int64_t t = series.first_time() + s; t + 1 <= series.last_time(); ++t) {
    std::vector<const Frame*> frames;
    for (std::int64_t u = t - s; u <= t + 1; ++u) {
      const Frame* f = series.at(u);
      if (!f) break;
      frames.push_back(f);
    }
    if (frames.size() != static_cast<std::size_t>(s + 2)) continue;

    std::vector<AgentId> ids;
    for (const auto& a : frames.back()->agents) {
      bool everywhere = true;
      for (const Frame* f : frames)
        if (!f->find(a.id)) {
          everywhere = false;
          break;
        }
      if (everywhere) ids.push_back(a.id);
    }
    if (ids.empty()) continue;
    std::sort(ids.begin(), ids.end());
    if (ids.size() > static_cast<std::size_t>(config.max_agents)) ids.resize(static_cast<std::size_t>(config.max_agents));

    std::vector<std::vector<AgentState>> hist;
    std::vector<AgentState> next;
    for (AgentId id : ids) {
      std::vector<AgentState> h;
      for (int l = 0; l <= s; ++l) h.push_back(*frames[static_cast<std::size_t>(l)]->find(id));
      hist.push_back(std::move(h));
      next.push_back(*frames.back()->find(id));
    }
    out.push_back({make_window(hist, config), make_targets(next, config.norm)});
  }
  return out;
}

std::vector<TrainingSample> build_samples(const std::vector<FrameSeries>& segments,
                                          const std::vector<std::size_t>& indices,
                                          const ModelConfig& config) {
  std::vector<TrainingSample> out;
  for (std::size_t i : indices) {
    auto part = build_samples(segments.at(i), config);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace rosa
