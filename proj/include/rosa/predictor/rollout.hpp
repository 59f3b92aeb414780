#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rosa/data/agent.hpp"
#include "rosa/predictor/model.hpp"

namespace rosa {

/// Produces frames t+1 .. t+m from history frames ending at t.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string name() const = 0;
  virtual std::vector<Frame> rollout(const std::vector<Frame>& history, int m) const = 0;
};

/// Feeds each one-step prediction back as input. Agents are those of the
/// last history frame; an agent missing from an earlier history frame is
/// back-filled with its earliest observed state. The window keeps at most
/// `history_frames` observed frames and grows by one per predicted step.
class AutoregressivePredictor : public Predictor {
 public:
  explicit AutoregressivePredictor(int history_frames) : history_frames_(history_frames) {}
  std::vector<Frame> rollout(const std::vector<Frame>& history, int m) const override;

  /// One step for agents with equal-length histories (oldest first).
  virtual std::vector<AgentState> predict_next(
      const std::vector<std::vector<AgentState>>& histories) const = 0;

 private:
  int history_frames_;
};

/// Straight-line extrapolation at current speed and heading.
class ConstantVelocityPredictor : public AutoregressivePredictor {
 public:
  explicit ConstantVelocityPredictor(int history_frames = 4) : AutoregressivePredictor(history_frames) {}
  std::string name() const override { return "constant-velocity"; }
  std::vector<AgentState> predict_next(const std::vector<std::vector<AgentState>>& histories) const override;
};

class TransformerPredictor : public AutoregressivePredictor {
 public:
  explicit TransformerPredictor(std::shared_ptr<const ModelParameters> params);
  std::string name() const override;
  std::vector<AgentState> predict_next(const std::vector<std::vector<AgentState>>& histories) const override;
  const ModelParameters& params() const { return *params_; }

 private:
  std::shared_ptr<const ModelParameters> params_;
};

/// Replays the true future frames; needs the full series.
class OraclePredictor : public Predictor {
 public:
  explicit OraclePredictor(const FrameSeries& truth) : truth_(&truth) {}
  std::string name() const override { return "ground-truth"; }
  /// Throws BackgroundExhausted when the series ends before t+m.
  std::vector<Frame> rollout(const std::vector<Frame>& history, int m) const override;

 private:
  const FrameSeries* truth_;
};

/// Frames [t - s, t] of a series, skipping times that are absent.
std::vector<Frame> history_window(const FrameSeries& series, std::int64_t t, int s);

}  // namespace rosa
