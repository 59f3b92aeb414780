#pragma once

#include <vector>

#include "rosa/data/agent.hpp"
#include "rosa/predictor/model.hpp"

namespace rosa {

/// Encodes per-agent histories (all of equal length, oldest first) into a
/// model window. `valid` marks back-filled or padded agents; empty means
/// all valid.
SceneWindow make_window(const std::vector<std::vector<AgentState>>& histories,
                        const ModelConfig& config, const std::vector<bool>& valid = {});

/// Normalized 7-wide targets, one row per state.
Eigen::MatrixXd make_targets(const std::vector<AgentState>& states, const Normalizer& norm);

struct TrainingSample {
  SceneWindow window;
  Eigen::MatrixXd target;
};

/// One sample per time t with frames t-s .. t+1 all present; agents must
/// appear in every one of those frames. Agents beyond max_agents are
/// dropped in id order.
std::vector<TrainingSample> build_samples(const FrameSeries& series, const ModelConfig& config);

std::vector<TrainingSample> build_samples(const std::vector<FrameSeries>& segments,
                                          const std::vector<std::size_t>& indices,
                                          const ModelConfig& config);

}  // namespace rosa
