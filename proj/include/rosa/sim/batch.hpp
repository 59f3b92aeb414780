#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rosa/sim/simulator.hpp"

namespace rosa {

struct ScenarioResult {
  std::string id;
  std::optional<TripLog> baseline;
  std::optional<TripLog> advised;
  std::string error_code;  // empty on success
  std::string error;
  bool ok() const { return baseline && advised; }
};

/// Baseline (no advisory) and advised run per scenario. Results keep input
/// order whatever the thread count; a failing scenario records its error
/// and the batch carries on.
std::vector<ScenarioResult> run_batch(const std::vector<ScenarioSpec>& specs,
                                      const PredictorSetting& advised, const SimConfig& config,
                                      int parallelism = 1);

}  // namespace rosa
