#pragma once

#include <functional>
#include <vector>

#include "json.hpp"
#include "rosa/data/split.hpp"
#include "rosa/predictor/loss.hpp"
#include "rosa/predictor/samples.hpp"

namespace rosa {

struct EpochRecord {
  int epoch = 0;  // 0 is the untrained model
  double train_loss = 0.0;
  double val_loss = 0.0;
  LossComponents train_components;
  LossComponents val_components;
};

struct TrainingHistory {
  ModelConfig config;
  std::size_t train_samples = 0;
  std::size_t val_samples = 0;
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
};

nlohmann::json to_json(const TrainingHistory& h);

struct TrainResult {
  ModelParameters params;
  TrainingHistory history;
};

/// Mean per-sample loss under the config's effective weights. When `grad`
/// is given it receives the mean gradient (resized and overwritten).
double batch_loss(const ModelParameters& params, const std::vector<TrainingSample>& samples,
                  std::vector<double>* grad = nullptr, LossComponents* components = nullptr);

double batch_loss(const ModelParameters& params, const std::vector<const TrainingSample*>& samples,
                  std::vector<double>* grad = nullptr, LossComponents* components = nullptr);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Minibatch gradient descent from a seeded initialization; returns the
/// parameters of the epoch with the lowest validation loss (training loss
/// when there is no validation data). Throws EmptyDataset, DivergedLoss.
TrainResult train(const std::vector<TrainingSample>& train_set,
                  const std::vector<TrainingSample>& val_set, const ModelConfig& config,
                  const EpochCallback& on_epoch = {});

}  // namespace rosa
