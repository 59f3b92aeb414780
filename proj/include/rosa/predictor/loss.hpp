#pragma once

#include <Eigen/Dense>

#include "json.hpp"
#include "rosa/predictor/model.hpp"

namespace rosa {

/// Unweighted per-term values, averaged over agents.
struct LossComponents {
  double pos = 0.0;
  double vel = 0.0;
  double acc = 0.0;
  double ori = 0.0;
  double unit = 0.0;
};

struct LossResult {
  double value = 0.0;  // weighted sum
  LossComponents components;
  Eigen::MatrixXd grad;  // d(value)/d(pred), same shape as pred
};

double smooth_l1(double x, double beta);
double smooth_l1_grad(double x, double beta);

/// pred and truth hold one row per valid agent in the 7-wide normalized
/// layout. An empty batch has zero loss.
LossResult composite_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth,
                          const LossWeights& w, double beta = 1.0);

nlohmann::json to_json(const LossComponents& c);

}  // namespace rosa
