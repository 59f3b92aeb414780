#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rosa/predictor/samples.hpp"

namespace rosa {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t coords_checked = 0;
  std::size_t worst_index = 0;  // flat parameter index
  std::string worst_tensor;
  int worst_row = 0;
  int worst_col = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double loss = 0.0;
};

nlohmann::json to_json(const GradCheckResult& r);

/// Central differences of batch_loss on `coords` distinct random parameter
/// coordinates (all of them if the model is smaller). Relative error is
/// |a - n| / max(|a| + |n|, 1e-6). Throws NonFiniteLoss, InvalidSpec for
/// epsilon outside [1e-7, 1e-4].
GradCheckResult gradient_check(const ModelParameters& params,
                               const std::vector<TrainingSample>& batch, double epsilon,
                               std::size_t coords = 200, std::uint64_t seed = 0);

}  // namespace rosa
