#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "rosa/data/roundabout.hpp"
#include "rosa/predictor/rollout.hpp"
#include "rosa/zones/occupancy.hpp"

namespace rosa {

struct HorizonError {
  int horizon = 0;
  double ade = 0.0;
  double fde = 0.0;
};

/// Running sums of displacement per horizon step.
class DisplacementAccumulator {
 public:
  explicit DisplacementAccumulator(int horizon);

  /// Every agent of truth[k] must appear in pred[k]; extra predicted agents
  /// are ignored. Throws AlignmentError.
  void add(const std::vector<Frame>& pred, const std::vector<Frame>& truth);

  int horizon() const { return horizon_; }
  std::size_t count(int step) const { return count_[static_cast<std::size_t>(step - 1)]; }
  /// Mean displacement over steps 1..h.
  double ade(int h) const;
  /// Mean displacement at step h.
  double fde(int h) const;
  std::vector<HorizonError> curve() const;

 private:
  int horizon_;
  std::vector<double> sum_;
  std::vector<std::size_t> count_;
};

/// ADE/FDE of one aligned rollout, with the per-horizon curve.
struct AdeFde {
  double ade = 0.0;
  double fde = 0.0;
  std::vector<HorizonError> curve;
};

AdeFde ade_fde(const std::vector<Frame>& pred, const std::vector<Frame>& truth);

struct PredictionReport {
  std::string predictor;
  int horizon = 0;
  std::size_t samples = 0;
  std::vector<HorizonError> displacement;
  // per step 1..horizon
  std::vector<ClassificationReport> crosswalk;
  std::vector<ClassificationReport> entry;
};

struct EvaluationOptions {
  int history = 3;
  int horizon = 5;
  int stride = 1;  // seconds between evaluated reference times
};

/// Rolls the predictor out from every reference time t of every series that
/// has history [t-s, t] and future [t+1, t+m]. Displacements are scored on
/// agents present at t and at every future step; occupancy is scored
/// against all ground-truth agents.
PredictionReport prediction_report(const Predictor& predictor, const std::vector<FrameSeries>& series,
                                   const RoundaboutGeometry& geo, const EvaluationOptions& opt);

/// Builds the predictor for one series (the ground-truth oracle needs the
/// series it replays).
using PredictorFactory = std::function<std::unique_ptr<Predictor>(const FrameSeries&)>;
PredictionReport prediction_report(const PredictorFactory& make, const std::vector<FrameSeries>& series,
                                   const RoundaboutGeometry& geo, const EvaluationOptions& opt);

nlohmann::json to_json(const PredictionReport& r);
std::string format_table(const PredictionReport& r);

}  // namespace rosa
