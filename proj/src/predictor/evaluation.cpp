#include "rosa/predictor/evaluation.hpp"

#include <cstdio>
#include <functional>

#include "rosa/error.hpp"

namespace rosa {

DisplacementAccumulator::DisplacementAccumulator(int horizon)
    : horizon_(horizon), sum_(static_cast<std::size_t>(horizon), 0.0),
      count_(static_cast<std::size_t>(horizon), 0) {
  if (horizon < 1) throw Error(ErrorCode::HorizonMismatch, "horizon must be >= 1");
}

void DisplacementAccumulator::add(const std::vector<Frame>& pred, const std::vector<Frame>& truth) {
  if (pred.size() != static_cast<std::size_t>(horizon_) || truth.size() != pred.size())
    throw Error(ErrorCode::AlignmentError, "rollout has " + std::to_string(pred.size()) +
                                               " frames, truth " + std::to_string(truth.size()) +
                                               ", horizon " + std::to_string(horizon_));
  for (std::size_t k = 0; k < truth.size(); ++k)
    for (const auto& a : truth[k].agents) {
      const AgentState* p = pred[k].find(a.id);
      if (!p)
        throw Error(ErrorCode::AlignmentError, "agent " + std::to_string(a.id) +
                                                   " missing from prediction step " + std::to_string(k + 1));
      sum_[k] += (p->pos - a.pos).norm();
      ++count_[k];
    }
}

double DisplacementAccumulator::ade(int h) const {
  double s = 0.0;
  std::size_t n = 0;
  for (int k = 0; k < h; ++k) {
    s += sum_[static_cast<std::size_t>(k)];
    n += count_[static_cast<std::size_t>(k)];
  }
  return n ? s / static_cast<double>(n) : 0.0;
}

double DisplacementAccumulator::fde(int h) const {
  const auto k = static_cast<std::size_t>(h - 1);
  return count_[k] ? sum_[k] / static_cast<double>(count_[k]) : 0.0;
}

std::vector<HorizonError> DisplacementAccumulator::curve() const {
  std::vector<HorizonError> out;
  for (int h = 1; h <= horizon_; ++h) out.push_back({h, ade(h), fde(h)});
  return out;
}

AdeFde ade_fde(const std::vector<Frame>& pred, const std::vector<Frame>& truth) {
  if (truth.empty()) throw Error(ErrorCode::AlignmentError, "empty truth");
  DisplacementAccumulator acc(static_cast<int>(truth.size()));
  acc.add(pred, truth);
  AdeFde r;
  r.curve = acc.curve();
  r.ade = r.curve.back().ade;
  r.fde = r.curve.back().fde;
  return r;
}

namespace {

std::vector<int> zone_ids_of(const RoundaboutGeometry& geo, ZoneKind kind) {
  std::vector<int> ids;
  for (const auto& z : geo.zones)
    if (z.kind == kind) ids.push_back(z.id);
  return ids;
}

}  // namespace

namespace {

PredictionReport report_impl(const std::function<const Predictor&(const FrameSeries&)>& predictor_for,
                             const std::vector<FrameSeries>& series, const RoundaboutGeometry& geo,
                             const EvaluationOptions& opt) {
  PredictionReport rep;
  rep.horizon = opt.horizon;
  DisplacementAccumulator acc(opt.horizon);
  std::vector<OccupancyMatrix> pred_occ, true_occ;

  for (const auto& s : series) {
    if (s.empty()) continue;
    const Predictor& predictor = predictor_for(s);
    rep.predictor = predictor.name();
    for (std::int64_t t = s.first_time() + opt.history; t + opt.horizon <= s.last_time();
         t += opt.stride) {
      const auto hist = history_window(s, t, opt.history);
      if (hist.size() != static_cast<std::size_t>(opt.history + 1)) continue;
      const auto pred = predictor.rollout(hist, opt.horizon);

      std::vector<Frame> truth;
      for (int k = 1; k <= opt.horizon; ++k) {
        const Frame* f = s.at(t + k);
        if (!f) throw Error(ErrorCode::AlignmentError, "series has a gap at t=" + std::to_string(t + k));
        truth.push_back(*f);
      }
      std::vector<Frame> scored = truth;
      for (auto& f : scored) {
        std::vector<AgentState> keep;
        for (const auto& a : f.agents) {
          bool everywhere = hist.back().find(a.id) != nullptr;
          for (const auto& g : truth) everywhere = everywhere && g.find(a.id);
          if (everywhere) keep.push_back(a);
        }
        f.agents = std::move(keep);
      }
      acc.add(pred, scored);
      pred_occ.push_back(occupancy_series(pred, geo.zones, opt.horizon, OccupancySource::Predicted));
      true_occ.push_back(occupancy_series(truth, geo.zones, opt.horizon, OccupancySource::GroundTruth));
      ++rep.samples;
    }
  }
  rep.displacement = acc.curve();
  const auto cw = zone_ids_of(geo, ZoneKind::Crosswalk);
  const auto en = zone_ids_of(geo, ZoneKind::Entry);
  for (int k = 1; k <= opt.horizon; ++k) {
    rep.crosswalk.push_back(occupancy_metrics(pred_occ, true_occ, k, cw));
    rep.entry.push_back(occupancy_metrics(pred_occ, true_occ, k, en));
  }
  return rep;
}

}  // namespace

PredictionReport prediction_report(const Predictor& predictor, const std::vector<FrameSeries>& series,
                                   const RoundaboutGeometry& geo, const EvaluationOptions& opt) {
  PredictionReport rep = report_impl([&](const FrameSeries&) -> const Predictor& { return predictor; }, series,
                                     geo, opt);
  rep.predictor = predictor.name();
  return rep;
}

PredictionReport prediction_report(const PredictorFactory& make, const std::vector<FrameSeries>& series,
                                   const RoundaboutGeometry& geo, const EvaluationOptions& opt) {
  std::unique_ptr<Predictor> current;
  return report_impl(
      [&](const FrameSeries& s) -> const Predictor& {
        current = make(s);
        return *current;
      },
      series, geo, opt);
}

nlohmann::json to_json(const PredictionReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < r.displacement.size(); ++i) {
    const auto& d = r.displacement[i];
    nlohmann::json row = {{"horizon_s", d.horizon}, {"ade_m", d.ade}, {"fde_m", d.fde}};
    if (i < r.crosswalk.size()) row["crosswalk"] = to_json(r.crosswalk[i]);
    if (i < r.entry.size()) row["entry"] = to_json(r.entry[i]);
    rows.push_back(row);
  }
  return {{"predictor", r.predictor}, {"horizon", r.horizon}, {"samples", r.samples}, {"per_horizon", rows}};
}

std::string format_table(const PredictionReport& r) {
  std::string out = "predictor: " + r.predictor + "  samples: " + std::to_string(r.samples) + "\n";
  out += "  h   ADE[m]   FDE[m]   cw prec  cw rec   en prec  en rec\n";
  char line[128];
  for (std::size_t i = 0; i < r.displacement.size(); ++i) {
    const auto& d = r.displacement[i];
    std::snprintf(line, sizeof line, "%3d %8.3f %8.3f %9.3f %7.3f %9.3f %7.3f\n", d.horizon, d.ade,
                  d.fde, r.crosswalk[i].precision, r.crosswalk[i].recall, r.entry[i].precision,
                  r.entry[i].recall);
    out += line;
  }
  return out;
}

}  // namespace rosa
