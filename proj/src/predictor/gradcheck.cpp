#include "rosa/predictor/gradcheck.hpp"

#include <cmath>
#include <numeric>

#include "rosa/error.hpp"
#include "rosa/predictor/train.hpp"
#include "rosa/rng.hpp"

namespace rosa {

nlohmann::json to_json(const GradCheckResult& r) {
  return {{"max_rel_error", r.max_rel_error},
          {"coords_checked", r.coords_checked},
          {"worst",
           {{"index", r.worst_index},
            {"tensor", r.worst_tensor},
            {"row", r.worst_row},
            {"col", r.worst_col},
            {"analytic", r.analytic},
            {"numeric", r.numeric}}},
          {"loss", r.loss}};
}

GradCheckResult gradient_check(const ModelParameters& params,
                               const std::vector<TrainingSample>& batch, double epsilon,
                               std::size_t coords, std::uint64_t seed) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-4))
    throw Error(ErrorCode::InvalidSpec, "epsilon must lie in [1e-7, 1e-4]");
  GradCheckResult res;
  std::vector<double> grad;
  res.loss = batch_loss(params, batch, &grad);
  if (!std::isfinite(res.loss)) throw Error(ErrorCode::NonFiniteLoss, "batch loss is not finite");

  std::vector<std::size_t> idx(params.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  const std::size_t n = std::min(coords, idx.size());
  for (std::size_t i = 0; i < n; ++i) std::swap(idx[i], idx[i + rng.index(idx.size() - i)]);

  ModelParameters probe = params;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = idx[i];
    const double orig = probe.data()[k];
    probe.data()[k] = orig + epsilon;
    const double up = batch_loss(probe, batch);
    probe.data()[k] = orig - epsilon;
    const double down = batch_loss(probe, batch);
    probe.data()[k] = orig;
    if (!std::isfinite(up) || !std::isfinite(down))
      throw Error(ErrorCode::NonFiniteLoss, "perturbed loss is not finite");
    const double num = (up - down) / (2.0 * epsilon);
    const double err = std::abs(grad[k] - num) / std::max(std::abs(grad[k]) + std::abs(num), 1e-6);
    if (i == 0 || err > res.max_rel_error) {
      res.max_rel_error = err;
      res.worst_index = k;
      res.analytic = grad[k];
      res.numeric = num;
    }
  }
  res.coords_checked = n;
  for (const auto& t : params.tensors())
    if (res.worst_index >= t.offset && res.worst_index < t.offset + t.size()) {
      const std::size_t local = res.worst_index - t.offset;
      res.worst_tensor = t.name;
      res.worst_row = static_cast<int>(local % static_cast<std::size_t>(t.rows));
      res.worst_col = static_cast<int>(local / static_cast<std::size_t>(t.rows));
    }
  return res;
}

}  // namespace rosa
