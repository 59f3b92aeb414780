#include "rosa/predictor/model.hpp"

#include <cmath>
#include <limits>

#include "rosa/error.hpp"
#include "rosa/rng.hpp"

namespace rosa {

using Eigen::MatrixXd;

void ModelConfig::validate() const {
  auto bad = [](const std::string& m) { return Error(ErrorCode::InvalidSpec, "model config: " + m); };
  if (history < 1) throw bad("history must be >= 1");
  if (horizon < 1) throw bad("horizon must be >= 1");
  if (max_agents < 1) throw bad("max_agents must be >= 1");
  if (embed_dim < 1 || layers < 0 || embed_hidden < 0 || head_hidden < 0 || ffn_hidden < 1)
    throw bad("layer widths must be positive");
  if (heads < 1 || embed_dim % heads != 0) throw bad("embed_dim must be divisible by heads");
  if (loss.pos <= 0.0) throw bad("position loss weight must be positive");
  if (loss.vel < 0.0 || loss.acc < 0.0 || loss.ori < 0.0 || loss.unit < 0.0)
    throw bad("loss weights must be non-negative");
  if (!(smooth_l1_beta > 0.0)) throw bad("smooth_l1_beta must be positive");
  if (batch_size < 1 || epochs < 0 || !(learning_rate > 0.0)) throw bad("bad optimizer settings");
  norm.validate();
}

LossWeights ModelConfig::effective_loss() const {
  if (features.has_dynamics()) return loss;
  return LossWeights{loss.pos, 0.0, 0.0, 0.0, 0.0};
}

nlohmann::json to_json(const ModelConfig& c) {
  return {
      {"variant", std::string(to_string(c.features.variant))},
      {"num_arms", c.features.num_arms},
      {"norm",
       {{"center", {c.norm.center.x, c.norm.center.y}},
        {"half_x", c.norm.half_x},
        {"half_y", c.norm.half_y},
        {"v_max", c.norm.v_max},
        {"a_max", c.norm.a_max}}},
      {"history", c.history},
      {"horizon", c.horizon},
      {"max_agents", c.max_agents},
      {"embed_dim", c.embed_dim},
      {"embed_hidden", c.embed_hidden},
      {"layers", c.layers},
      {"heads", c.heads},
      {"ffn_hidden", c.ffn_hidden},
      {"head_hidden", c.head_hidden},
      {"residual_output", c.residual_output},
      {"loss_weights",
       {{"pos", c.loss.pos}, {"vel", c.loss.vel}, {"acc", c.loss.acc}, {"ori", c.loss.ori},
        {"unit", c.loss.unit}}},
      {"smooth_l1_beta", c.smooth_l1_beta},
      {"optimizer", c.optimizer == OptimizerKind::Adam ? "adam" : "sgd"},
      {"learning_rate", c.learning_rate},
      {"batch_size", c.batch_size},
      {"epochs", c.epochs},
      {"grad_clip", c.grad_clip},
      {"seed", c.seed},
  };
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.features.variant = parse_variant(j.value("variant", std::string("dynamics")));
    c.features.num_arms = j.value("num_arms", c.features.num_arms);
    if (j.contains("norm")) {
      const auto& n = j.at("norm");
      const auto center = n.value("center", std::vector<double>{0.0, 0.0});
      c.norm.center = {center.at(0), center.at(1)};
      c.norm.half_x = n.value("half_x", c.norm.half_x);
      c.norm.half_y = n.value("half_y", c.norm.half_y);
      c.norm.v_max = n.value("v_max", c.norm.v_max);
      c.norm.a_max = n.value("a_max", c.norm.a_max);
    }
    c.history = j.value("history", c.history);
    c.horizon = j.value("horizon", c.horizon);
    c.max_agents = j.value("max_agents", c.max_agents);
    c.embed_dim = j.value("embed_dim", c.embed_dim);
    c.embed_hidden = j.value("embed_hidden", c.embed_hidden);
    c.layers = j.value("layers", c.layers);
    c.heads = j.value("heads", c.heads);
    c.ffn_hidden = j.value("ffn_hidden", c.ffn_hidden);
    c.head_hidden = j.value("head_hidden", c.head_hidden);
    c.residual_output = j.value("residual_output", c.residual_output);
    if (j.contains("loss_weights")) {
      const auto& w = j.at("loss_weights");
      c.loss.pos = w.value("pos", c.loss.pos);
      c.loss.vel = w.value("vel", c.loss.vel);
      c.loss.acc = w.value("acc", c.loss.acc);
      c.loss.ori = w.value("ori", c.loss.ori);
      c.loss.unit = w.value("unit", c.loss.unit);
    }
    c.smooth_l1_beta = j.value("smooth_l1_beta", c.smooth_l1_beta);
    c.optimizer = j.value("optimizer", std::string("adam")) == "adam" ? OptimizerKind::Adam
                                                                     : OptimizerKind::Sgd;
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.grad_clip = j.value("grad_clip", c.grad_clip);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("model config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

std::vector<TensorInfo> build_layout(const ModelConfig& c) {
  std::vector<TensorInfo> t;
  std::size_t offset = 0;
  auto add = [&](std::string name, int rows, int cols) {
    t.push_back({std::move(name), rows, cols, offset});
    offset += t.back().size();
  };
  const int f = c.features.input_width();
  const int d = c.embed_dim;
  if (c.embed_hidden > 0) {
    add("embed.w1", f, c.embed_hidden);
    add("embed.b1", 1, c.embed_hidden);
    add("embed.w2", c.embed_hidden, d);
    add("embed.b2", 1, d);
  } else {
    add("embed.w", f, d);
    add("embed.b", 1, d);
  }
  add("pos", c.positional_slots(), d);
  for (int l = 0; l < c.layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    add(p + "wq", d, d);
    add(p + "wk", d, d);
    add(p + "wv", d, d);
    add(p + "wo", d, d);
    add(p + "bo", 1, d);
    add(p + "ffn_w1", d, c.ffn_hidden);
    add(p + "ffn_b1", 1, c.ffn_hidden);
    add(p + "ffn_w2", c.ffn_hidden, d);
    add(p + "ffn_b2", 1, d);
  }
  if (c.head_hidden > 0) {
    add("head.w1", d, c.head_hidden);
    add("head.b1", 1, c.head_hidden);
    add("head.w2", c.head_hidden, kOutputWidth);
    add("head.b2", 1, kOutputWidth);
  } else {
    add("head.w", d, kOutputWidth);
    add("head.b", 1, kOutputWidth);
  }
  return t;
}

// Output column k copies input column kResidualSource[k] when residual
// output is on; -1 means no source for that column.
constexpr int kResidualSource[kOutputWidth] = {1, 2, 3, 4, 5, 6, 7};

// Tensor indices resolved once per call.
struct Slots {
  int ew1 = -1, eb1 = -1, ew2 = -1, eb2 = -1, ew = -1, eb = -1, pos = -1;
  struct Layer {
    int wq, wk, wv, wo, bo, fw1, fb1, fw2, fb2;
  };
  std::vector<Layer> layers;
  int hw1 = -1, hb1 = -1, hw2 = -1, hb2 = -1, hw = -1, hb = -1;

  explicit Slots(const ModelParameters& p) {
    const auto& c = p.config();
    auto ix = [&](const std::string& n) { return static_cast<int>(p.index_of(n)); };
    if (c.embed_hidden > 0) {
      ew1 = ix("embed.w1");
      eb1 = ix("embed.b1");
      ew2 = ix("embed.w2");
      eb2 = ix("embed.b2");
    } else {
      ew = ix("embed.w");
      eb = ix("embed.b");
    }
    pos = ix("pos");
    for (int l = 0; l < c.layers; ++l) {
      const std::string q = "layer" + std::to_string(l) + ".";
      layers.push_back({ix(q + "wq"), ix(q + "wk"), ix(q + "wv"), ix(q + "wo"), ix(q + "bo"),
                        ix(q + "ffn_w1"), ix(q + "ffn_b1"), ix(q + "ffn_w2"), ix(q + "ffn_b2")});
    }
    if (c.head_hidden > 0) {
      hw1 = ix("head.w1");
      hb1 = ix("head.b1");
      hw2 = ix("head.w2");
      hb2 = ix("head.b2");
    } else {
      hw = ix("head.w");
      hb = ix("head.b");
    }
  }
};

MatrixXd relu(const MatrixXd& m) { return m.cwiseMax(0.0); }

MatrixXd relu_mask(const MatrixXd& pre) {
  return (pre.array() > 0.0).cast<double>().matrix();
}

}  // namespace

ModelParameters ModelParameters::zeros(const ModelConfig& config) {
  config.validate();
  ModelParameters p;
  p.config_ = config;
  p.tensors_ = build_layout(config);
  const auto& last = p.tensors_.back();
  p.data_.assign(last.offset + last.size(), 0.0);
  return p;
}

ModelParameters ModelParameters::initialize(const ModelConfig& config, std::uint64_t seed) {
  ModelParameters p = zeros(config);
  Rng rng(seed);
  for (const auto& t : p.tensors_) {
    const bool bias = t.rows == 1 && t.name != "pos";
    if (bias) continue;
    double limit = std::sqrt(6.0 / (t.rows + t.cols));
    if (t.name == "pos") limit = 0.1;
    // small final layer: the untrained model starts close to the residual
    if (t.name == "head.w2" || t.name == "head.w") limit *= 0.1;
    for (std::size_t i = 0; i < t.size(); ++i) p.data_[t.offset + i] = rng.uniform(-limit, limit);
  }
  return p;
}

std::size_t ModelParameters::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < tensors_.size(); ++i)
    if (tensors_[i].name == name) return i;
  throw Error(ErrorCode::InvalidSpec, "no tensor named " + name);
}

MatrixMap ModelParameters::tensor(const std::string& name) { return view(data_, index_of(name)); }

ConstMatrixMap ModelParameters::tensor(const std::string& name) const {
  return view(data_, index_of(name));
}

MatrixMap ModelParameters::view(std::vector<double>& buffer, std::size_t i) const {
  const auto& t = tensors_[i];
  return MatrixMap(buffer.data() + t.offset, t.rows, t.cols);
}

ConstMatrixMap ModelParameters::view(const std::vector<double>& buffer, std::size_t i) const {
  const auto& t = tensors_[i];
  return ConstMatrixMap(buffer.data() + t.offset, t.rows, t.cols);
}

bool ModelParameters::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

int SceneWindow::valid_count() const {
  int n = 0;
  for (int a = 0; a < agents; ++a)
    if (valid.empty() || valid[static_cast<std::size_t>(a)]) ++n;
  return n;
}

PredictionOutput forward(const ModelParameters& params, const SceneWindow& window,
                         ForwardCache* cache) {
  const ModelConfig& c = params.config();
  if (window.length < c.history + 1)
    throw Error(ErrorCode::WindowTooShort, "window of " + std::to_string(window.length) +
                                               " frames, need " + std::to_string(c.history + 1));
  if (window.length > c.positional_slots())
    throw Error(ErrorCode::UnknownOffset, "window of " + std::to_string(window.length) +
                                              " frames exceeds positional table of " +
                                              std::to_string(c.positional_slots()));
  if (window.agents < 1 || window.agents > c.max_agents)
    throw Error(ErrorCode::InvalidSpec, "agent count outside [1, max_agents]");
  const int n_tok = window.agents * window.length;
  if (window.tokens.rows() != n_tok || window.tokens.cols() != c.features.input_width())
    throw Error(ErrorCode::InvalidSpec, "window tensor has the wrong shape");
  if (!window.valid.empty() && static_cast<int>(window.valid.size()) != window.agents)
    throw Error(ErrorCode::InvalidSpec, "validity mask length differs from agent count");

  ForwardCache local;
  ForwardCache& fc = cache ? *cache : local;
  const Slots s(params);
  const auto& buf = params.data();
  auto W = [&](int i) { return params.view(buf, static_cast<std::size_t>(i)); };

  fc.mask = build_attention_mask(window.agents, window.length, window.valid);
  fc.x0 = window.tokens;
  MatrixXd x;
  if (c.embed_hidden > 0) {
    fc.pre1 = fc.x0 * W(s.ew1);
    fc.pre1.rowwise() += W(s.eb1).row(0);
    fc.e1 = relu(fc.pre1);
    x = fc.e1 * W(s.ew2);
    x.rowwise() += W(s.eb2).row(0);
  } else {
    x = fc.x0 * W(s.ew);
    x.rowwise() += W(s.eb).row(0);
  }
  const auto pos = W(s.pos);
  for (int a = 0; a < window.agents; ++a)
    for (int l = 0; l < window.length; ++l) x.row(a * window.length + l) += pos.row(window.length - 1 - l);

  const int d = c.embed_dim;
  const int dh = d / c.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  fc.layers.assign(static_cast<std::size_t>(c.layers), {});
  for (int l = 0; l < c.layers; ++l) {
    const auto& ls = s.layers[static_cast<std::size_t>(l)];
    LayerCache& lc = fc.layers[static_cast<std::size_t>(l)];
    lc.x = x;
    lc.q = x * W(ls.wq);
    lc.k = x * W(ls.wk);
    lc.v = x * W(ls.wv);
    lc.o = MatrixXd::Zero(n_tok, d);
    lc.attn.assign(static_cast<std::size_t>(c.heads), {});
    for (int h = 0; h < c.heads; ++h) {
      MatrixXd scores = lc.q.middleCols(h * dh, dh) * lc.k.middleCols(h * dh, dh).transpose() * scale;
      MatrixXd& a = lc.attn[static_cast<std::size_t>(h)];
      a = MatrixXd::Zero(n_tok, n_tok);
      for (int i = 0; i < n_tok; ++i) {
        double m = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < n_tok; ++j)
          if (fc.mask.allowed(i, j)) m = std::max(m, scores(i, j));
        if (!std::isfinite(m)) continue;  // padding row: attends to nothing
        double z = 0.0;
        for (int j = 0; j < n_tok; ++j)
          if (fc.mask.allowed(i, j)) {
            a(i, j) = std::exp(scores(i, j) - m);
            z += a(i, j);
          }
        a.row(i) /= z;
      }
      lc.o.middleCols(h * dh, dh) = a * lc.v.middleCols(h * dh, dh);
    }
    lc.x1 = x + lc.o * W(ls.wo);
    lc.x1.rowwise() += W(ls.bo).row(0);
    lc.f1 = lc.x1 * W(ls.fw1);
    lc.f1.rowwise() += W(ls.fb1).row(0);
    lc.r = relu(lc.f1);
    x = lc.x1 + lc.r * W(ls.fw2);
    x.rowwise() += W(ls.fb2).row(0);
  }
  fc.final_tokens = x;

  fc.out_rows.clear();
  for (int a = 0; a < window.agents; ++a)
    if (window.valid.empty() || window.valid[static_cast<std::size_t>(a)])
      fc.out_rows.push_back(a * window.length + window.length - 1);
  const int nv = static_cast<int>(fc.out_rows.size());
  MatrixXd z(nv, d);
  for (int r = 0; r < nv; ++r) z.row(r) = x.row(fc.out_rows[static_cast<std::size_t>(r)]);

  MatrixXd out;
  if (c.head_hidden > 0) {
    fc.z_pre = z * W(s.hw1);
    fc.z_pre.rowwise() += W(s.hb1).row(0);
    fc.hidden = relu(fc.z_pre);
    out = fc.hidden * W(s.hw2);
    out.rowwise() += W(s.hb2).row(0);
  } else {
    out = z * W(s.hw);
    out.rowwise() += W(s.hb).row(0);
  }
  if (c.residual_output) {
    const int width = c.features.input_width();
    for (int r = 0; r < nv; ++r)
      for (int k = 0; k < kOutputWidth; ++k) {
        const int src = kResidualSource[k];
        if (src >= 0 && src < width && (k < 2 || c.features.has_dynamics()))
          out(r, k) += fc.x0(fc.out_rows[static_cast<std::size_t>(r)], src);
      }
  }
  return out;
}

void backward(const ModelParameters& params, const SceneWindow& window, const ForwardCache& fc,
              const Eigen::MatrixXd& d_out, std::vector<double>& grad) {
  const ModelConfig& c = params.config();
  const Slots s(params);
  const auto& buf = params.data();
  auto W = [&](int i) { return params.view(buf, static_cast<std::size_t>(i)); };
  auto G = [&](int i) { return params.view(grad, static_cast<std::size_t>(i)); };
  const int n_tok = window.agents * window.length;
  const int d = c.embed_dim;
  const int nv = static_cast<int>(fc.out_rows.size());

  MatrixXd z(nv, d);
  for (int r = 0; r < nv; ++r) z.row(r) = fc.final_tokens.row(fc.out_rows[static_cast<std::size_t>(r)]);

  MatrixXd dz;
  if (c.head_hidden > 0) {
    G(s.hb2) += d_out.colwise().sum();
    G(s.hw2) += fc.hidden.transpose() * d_out;
    const MatrixXd dh = (d_out * W(s.hw2).transpose()).cwiseProduct(relu_mask(fc.z_pre));
    G(s.hw1) += z.transpose() * dh;
    G(s.hb1) += dh.colwise().sum();
    dz = dh * W(s.hw1).transpose();
  } else {
    G(s.hw) += z.transpose() * d_out;
    G(s.hb) += d_out.colwise().sum();
    dz = d_out * W(s.hw).transpose();
  }
  MatrixXd dx = MatrixXd::Zero(n_tok, d);
  for (int r = 0; r < nv; ++r) dx.row(fc.out_rows[static_cast<std::size_t>(r)]) += dz.row(r);

  const int dh = d / c.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  for (int l = c.layers - 1; l >= 0; --l) {
    const auto& ls = s.layers[static_cast<std::size_t>(l)];
    const LayerCache& lc = fc.layers[static_cast<std::size_t>(l)];
    G(ls.fb2) += dx.colwise().sum();
    G(ls.fw2) += lc.r.transpose() * dx;
    const MatrixXd df1 = (dx * W(ls.fw2).transpose()).cwiseProduct(relu_mask(lc.f1));
    G(ls.fw1) += lc.x1.transpose() * df1;
    G(ls.fb1) += df1.colwise().sum();
    const MatrixXd dx1 = dx + df1 * W(ls.fw1).transpose();

    G(ls.bo) += dx1.colwise().sum();
    G(ls.wo) += lc.o.transpose() * dx1;
    const MatrixXd d_o = dx1 * W(ls.wo).transpose();
    MatrixXd dq = MatrixXd::Zero(n_tok, d), dk = MatrixXd::Zero(n_tok, d), dv = MatrixXd::Zero(n_tok, d);
    for (int h = 0; h < c.heads; ++h) {
      const MatrixXd& a = lc.attn[static_cast<std::size_t>(h)];
      const MatrixXd d_oh = d_o.middleCols(h * dh, dh);
      const MatrixXd da = d_oh * lc.v.middleCols(h * dh, dh).transpose();
      dv.middleCols(h * dh, dh) = a.transpose() * d_oh;
      const Eigen::VectorXd row_dot = da.cwiseProduct(a).rowwise().sum();
      MatrixXd ds = a.cwiseProduct(da - row_dot.replicate(1, n_tok));
      ds *= scale;
      dq.middleCols(h * dh, dh) = ds * lc.k.middleCols(h * dh, dh);
      dk.middleCols(h * dh, dh) = ds.transpose() * lc.q.middleCols(h * dh, dh);
    }
    G(ls.wq) += lc.x.transpose() * dq;
    G(ls.wk) += lc.x.transpose() * dk;
    G(ls.wv) += lc.x.transpose() * dv;
    dx = dx1 + dq * W(ls.wq).transpose() + dk * W(ls.wk).transpose() + dv * W(ls.wv).transpose();
  }

  auto gpos = G(s.pos);
  for (int a = 0; a < window.agents; ++a)
    for (int l = 0; l < window.length; ++l) gpos.row(window.length - 1 - l) += dx.row(a * window.length + l);
  if (c.embed_hidden > 0) {
    G(s.ew2) += fc.e1.transpose() * dx;
    G(s.eb2) += dx.colwise().sum();
    const MatrixXd de1 = (dx * W(s.ew2).transpose()).cwiseProduct(relu_mask(fc.pre1));
    G(s.ew1) += fc.x0.transpose() * de1;
    G(s.eb1) += de1.colwise().sum();
  } else {
    G(s.ew) += fc.x0.transpose() * dx;
    G(s.eb) += dx.colwise().sum();
  }
}

}  // namespace rosa
