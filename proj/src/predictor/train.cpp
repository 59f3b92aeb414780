#include "rosa/predictor/train.hpp"

#include <cmath>
#include <numeric>

#include "rosa/error.hpp"
#include "rosa/rng.hpp"

namespace rosa {

nlohmann::json to_json(const TrainingHistory& h) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : h.epochs)
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"val_loss", e.val_loss},
                      {"train_components", to_json(e.train_components)},
                      {"val_components", to_json(e.val_components)}});
  return {{"config", to_json(h.config)},
          {"seed", h.config.seed},
          {"train_samples", h.train_samples},
          {"val_samples", h.val_samples},
          {"best_epoch", h.best_epoch},
          {"epochs", epochs}};
}

double batch_loss(const ModelParameters& params, const std::vector<const TrainingSample*>& samples,
                  std::vector<double>* grad, LossComponents* components) {
  const ModelConfig& c = params.config();
  const LossWeights w = c.effective_loss();
  if (grad) grad->assign(params.size(), 0.0);
  LossComponents sum;
  double total = 0.0;
  ForwardCache cache;
  for (const TrainingSample* s : samples) {
    const auto out = forward(params, s->window, grad ? &cache : nullptr);
    const LossResult r = composite_loss(out, s->target, w, c.smooth_l1_beta);
    total += r.value;
    sum.pos += r.components.pos;
    sum.vel += r.components.vel;
    sum.acc += r.components.acc;
    sum.ori += r.components.ori;
    sum.unit += r.components.unit;
    if (grad) backward(params, s->window, cache, r.grad, *grad);
  }
  if (samples.empty()) return 0.0;
  const double inv = 1.0 / static_cast<double>(samples.size());
  if (grad)
    for (double& g : *grad) g *= inv;
  if (components) {
    *components = {sum.pos * inv, sum.vel * inv, sum.acc * inv, sum.ori * inv, sum.unit * inv};
  }
  return total * inv;
}

double batch_loss(const ModelParameters& params, const std::vector<TrainingSample>& samples,
                  std::vector<double>* grad, LossComponents* components) {
  std::vector<const TrainingSample*> ptrs;
  ptrs.reserve(samples.size());
  for (const auto& s : samples) ptrs.push_back(&s);
  return batch_loss(params, ptrs, grad, components);
}

namespace {

class Optimizer {
 public:
  Optimizer(const ModelConfig& c, std::size_t n) : c_(c), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::vector<double>& p, const std::vector<double>& g) {
    const double lr = c_.learning_rate;
    if (c_.optimizer == OptimizerKind::Sgd) {
      for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
      return;
    }
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    ++t_;
    const double c1 = 1.0 - std::pow(b1, t_);
    const double c2 = 1.0 - std::pow(b2, t_);
    for (std::size_t i = 0; i < p.size(); ++i) {
      m_[i] = b1 * m_[i] + (1.0 - b1) * g[i];
      v_[i] = b2 * v_[i] + (1.0 - b2) * g[i] * g[i];
      p[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps);
    }
  }

 private:
  const ModelConfig& c_;
  std::vector<double> m_, v_;
  int t_ = 0;
};

void clip(std::vector<double>& g, double max_norm) {
  if (max_norm <= 0.0) return;
  double sq = 0.0;
  for (double x : g) sq += x * x;
  const double norm = std::sqrt(sq);
  if (norm > max_norm)
    for (double& x : g) x *= max_norm / norm;
}

}  // namespace

TrainResult train(const std::vector<TrainingSample>& train_set,
                  const std::vector<TrainingSample>& val_set, const ModelConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  if (train_set.empty()) throw Error(ErrorCode::EmptyDataset, "no training samples");

  TrainResult res;
  res.history.config = config;
  res.history.train_samples = train_set.size();
  res.history.val_samples = val_set.size();
  ModelParameters params = ModelParameters::initialize(config, derive_seed(config.seed, "init"));
  Rng shuffle(derive_seed(config.seed, "shuffle"));
  Optimizer opt(config, params.size());

  // Epoch 0 scores the untrained model on the full training set; later
  // epochs report the running mean of their minibatch losses.
  auto evaluate = [&](int epoch, const LossComponents* running, double running_loss) {
    EpochRecord r;
    r.epoch = epoch;
    if (running) {
      r.train_loss = running_loss;
      r.train_components = *running;
    } else {
      r.train_loss = batch_loss(params, train_set, nullptr, &r.train_components);
    }
    r.val_loss = val_set.empty() ? r.train_loss
                                 : batch_loss(params, val_set, nullptr, &r.val_components);
    if (val_set.empty()) r.val_components = r.train_components;
    if (!std::isfinite(r.train_loss) || !std::isfinite(r.val_loss))
      throw Error(ErrorCode::DivergedLoss, "loss became non-finite at epoch " + std::to_string(epoch));
    return r;
  };

  EpochRecord first = evaluate(0, nullptr, 0.0);
  res.history.epochs.push_back(first);
  if (on_epoch) on_epoch(first);
  double best = first.val_loss;
  res.params = params;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad;
  std::vector<const TrainingSample*> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.index(i)]);
    double loss_sum = 0.0;
    LossComponents comp_sum;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      batch.clear();
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      for (std::size_t k = start; k < end; ++k) batch.push_back(&train_set[order[k]]);
      LossComponents comp;
      const double loss = batch_loss(params, batch, &grad, &comp);
      if (!std::isfinite(loss))
        throw Error(ErrorCode::DivergedLoss, "loss became non-finite at epoch " + std::to_string(epoch));
      const auto n = static_cast<double>(batch.size());
      loss_sum += loss * n;
      comp_sum.pos += comp.pos * n;
      comp_sum.vel += comp.vel * n;
      comp_sum.acc += comp.acc * n;
      comp_sum.ori += comp.ori * n;
      comp_sum.unit += comp.unit * n;
      clip(grad, config.grad_clip);
      opt.step(params.data(), grad);
    }
    const double inv = 1.0 / static_cast<double>(train_set.size());
    const LossComponents mean{comp_sum.pos * inv, comp_sum.vel * inv, comp_sum.acc * inv, comp_sum.ori * inv,
                              comp_sum.unit * inv};
    EpochRecord r = evaluate(epoch, &mean, loss_sum * inv);
    res.history.epochs.push_back(r);
    if (on_epoch) on_epoch(r);
    if (r.val_loss < best) {
      best = r.val_loss;
      res.history.best_epoch = epoch;
      res.params = params;
    }
  }
  return res;
}

}  // namespace rosa
