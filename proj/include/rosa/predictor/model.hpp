#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "rosa/predictor/features.hpp"
#include "rosa/predictor/mask.hpp"

namespace rosa {

struct LossWeights {
  double pos = 1.0;
  double vel = 0.5;
  double acc = 0.25;
  double ori = 0.5;
  double unit = 0.1;
};

enum class OptimizerKind { Sgd, Adam };

struct ModelConfig {
  FeatureConfig features;
  Normalizer norm;
  int history = 3;        // past steps s; windows hold s+1 frames
  int horizon = 5;        // rollout steps m
  int max_agents = 64;    // padding bound N_max
  int embed_dim = 32;
  int embed_hidden = 64;  // 0: linear embedding
  int layers = 2;
  int heads = 4;
  int ffn_hidden = 64;
  int head_hidden = 64;   // 0: linear prediction head
  /// Adds the current input state to the head output, so the network
  /// predicts the one-second change.
  bool residual_output = true;
  LossWeights loss;
  double smooth_l1_beta = 1.0;

  OptimizerKind optimizer = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  int batch_size = 32;
  int epochs = 15;
  double grad_clip = 5.0;  // global gradient norm; 0 disables
  std::uint64_t seed = 42;

  int positional_slots() const { return history + horizon; }
  /// Throws InvalidSpec when an invariant is violated.
  void validate() const;
  /// Loss weights actually optimized: the position-only variant has no
  /// kinematic inputs, so only the position term is trained.
  LossWeights effective_loss() const;
};

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

struct TensorInfo {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::size_t offset = 0;
  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
};

using MatrixMap = Eigen::Map<Eigen::MatrixXd>;
using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;

/// All learnable weights in one flat buffer; tensors are column-major
/// views in declaration order.
class ModelParameters {
 public:
  ModelParameters() = default;
  /// Xavier-uniform weights, zero biases, seeded.
  static ModelParameters initialize(const ModelConfig& config, std::uint64_t seed);
  /// Same layout, every entry zero.
  static ModelParameters zeros(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  const std::vector<TensorInfo>& tensors() const { return tensors_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index_of(const std::string& name) const;
  MatrixMap tensor(const std::string& name);
  ConstMatrixMap tensor(const std::string& name) const;
  /// View of the same tensor inside another buffer with this layout.
  MatrixMap view(std::vector<double>& buffer, std::size_t tensor_index) const;
  ConstMatrixMap view(const std::vector<double>& buffer, std::size_t tensor_index) const;

  bool all_finite() const;

 private:
  ModelConfig config_;
  std::vector<TensorInfo> tensors_;
  std::vector<double> data_;
};

/// Normalized input for one scene. Row a * length + l holds agent a at
/// window position l (l = length-1 is the current step).
struct SceneWindow {
  int agents = 0;
  int length = 0;
  Eigen::MatrixXd tokens;
  std::vector<bool> valid;  // padding slots are false

  int valid_count() const;
};

/// One row per valid agent, in agent order: [px, py, v, a_tan, a_lat, sin, cos].
using PredictionOutput = Eigen::MatrixXd;

struct LayerCache {
  Eigen::MatrixXd x, q, k, v, o, x1, f1, r;
  std::vector<Eigen::MatrixXd> attn;
};

struct ForwardCache {
  AttentionMask mask;
  Eigen::MatrixXd x0, pre1, e1, z_pre, hidden;
  std::vector<LayerCache> layers;
  Eigen::MatrixXd final_tokens;
  std::vector<int> out_rows;
};

/// Throws WindowTooShort, UnknownOffset, or InvalidSpec (shape errors).
PredictionOutput forward(const ModelParameters& params, const SceneWindow& window,
                         ForwardCache* cache = nullptr);

/// Accumulates d(loss)/d(params) into `grad` (same layout as params) given
/// d(loss)/d(output).
void backward(const ModelParameters& params, const SceneWindow& window, const ForwardCache& cache,
              const Eigen::MatrixXd& d_output, std::vector<double>& grad);

}  // namespace rosa
