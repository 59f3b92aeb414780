#include "rosa/predictor/loss.hpp"

#include <cmath>

#include "rosa/error.hpp"

namespace rosa {

double smooth_l1(double x, double beta) {
  const double ax = std::abs(x);
  return ax < beta ? 0.5 * x * x / beta : ax - 0.5 * beta;
}

double smooth_l1_grad(double x, double beta) {
  if (std::abs(x) < beta) return x / beta;
  return x > 0.0 ? 1.0 : -1.0;
}

LossResult composite_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth,
                          const LossWeights& w, double beta) {
  if (pred.rows() != truth.rows() || pred.cols() != kOutputWidth || truth.cols() != kOutputWidth)
    throw Error(ErrorCode::LengthMismatch, "prediction and target shapes differ");
  LossResult res;
  const auto n = pred.rows();
  res.grad = Eigen::MatrixXd::Zero(n, kOutputWidth);
  if (n == 0) return res;
  const double inv_n = 1.0 / static_cast<double>(n);
  auto& c = res.components;
  auto& g = res.grad;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dx = pred(i, 0) - truth(i, 0);
    const double dy = pred(i, 1) - truth(i, 1);
    c.pos += 0.5 * (dx * dx + dy * dy);
    g(i, 0) = w.pos * dx * inv_n;
    g(i, 1) = w.pos * dy * inv_n;

    const double dv = pred(i, 2) - truth(i, 2);
    c.vel += dv * dv;
    g(i, 2) = w.vel * 2.0 * dv * inv_n;

    for (int k = 3; k <= 4; ++k) {
      const double da = pred(i, k) - truth(i, k);
      c.acc += 0.5 * smooth_l1(da, beta);
      g(i, k) = w.acc * 0.5 * smooth_l1_grad(da, beta) * inv_n;
    }

    const double ps = pred(i, 5), pc = pred(i, 6);
    const double ds = ps - truth(i, 5);
    const double dc = pc - truth(i, 6);
    c.ori += 0.5 * (ds * ds + dc * dc);
    const double r = ps * ps + pc * pc - 1.0;
    c.unit += r * r;
    g(i, 5) = (w.ori * ds + w.unit * 4.0 * r * ps) * inv_n;
    g(i, 6) = (w.ori * dc + w.unit * 4.0 * r * pc) * inv_n;
  }
  c.pos *= inv_n;
  c.vel *= inv_n;
  c.acc *= inv_n;
  c.ori *= inv_n;
  c.unit *= inv_n;
  res.value = w.pos * c.pos + w.vel * c.vel + w.acc * c.acc + w.ori * c.ori + w.unit * c.unit;
  return res;
}

nlohmann::json to_json(const LossComponents& c) {
  return {{"pos", c.pos}, {"vel", c.vel}, {"acc", c.acc}, {"ori", c.ori}, {"unit", c.unit}};
}

}  // namespace rosa
