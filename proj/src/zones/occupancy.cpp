#include "rosa/zones/occupancy.hpp"

#include <algorithm>

#include "rosa/error.hpp"

namespace rosa {

OccupancyMatrix::OccupancyMatrix(std::vector<int> zone_ids, int horizon, OccupancySource source)
    : zone_ids_(std::move(zone_ids)),
      horizon_(horizon),
      source_(source),
      values_(zone_ids_.size() * static_cast<std::size_t>(std::max(horizon, 0)), 0) {}

bool OccupancyMatrix::at(std::size_t zone_index, int step) const {
  return values_[zone_index * static_cast<std::size_t>(horizon_) + static_cast<std::size_t>(step - 1)] != 0;
}

void OccupancyMatrix::set(std::size_t zone_index, int step, bool occupied) {
  values_[zone_index * static_cast<std::size_t>(horizon_) + static_cast<std::size_t>(step - 1)] =
      occupied ? 1 : 0;
}

std::size_t OccupancyMatrix::zone_index(int zone_id) const {
  auto it = std::find(zone_ids_.begin(), zone_ids_.end(), zone_id);
  if (it == zone_ids_.end())
    throw Error(ErrorCode::InvalidGeometry, "zone " + std::to_string(zone_id) + " not in matrix");
  return static_cast<std::size_t>(it - zone_ids_.begin());
}

bool OccupancyMatrix::occupied(int zone_id, int step) const {
  if (step < 1 || step > horizon_)
    throw Error(ErrorCode::HorizonMismatch, "step " + std::to_string(step) +
                                                " outside horizon " + std::to_string(horizon_));
  return at(zone_index(zone_id), step);
}

std::vector<bool> occupancy_from_frame(const std::vector<AgentState>& agents,
                                       const std::vector<ConflictZone>& zones) {
  std::vector<bool> occ(zones.size(), false);
  for (std::size_t z = 0; z < zones.size(); ++z) {
    const auto& zone = zones[z];
    for (const auto& a : agents) {
      if (a.cls != zone.relevant_class()) continue;
      if (zone.kind == ZoneKind::Entry && zone.carriageway && !zone.carriageway->contains(a.pos))
        continue;
      if (point_in_zone(a.pos, zone)) {
        occ[z] = true;
        break;
      }
    }
  }
  return occ;
}

namespace {

std::vector<int> ids_of(const std::vector<ConflictZone>& zones) {
  std::vector<int> ids;
  for (const auto& z : zones) ids.push_back(z.id);
  return ids;
}

}  // namespace

OccupancyMatrix occupancy_series(const std::vector<Frame>& rollout,
                                 const std::vector<ConflictZone>& zones, int horizon,
                                 OccupancySource source) {
  if (static_cast<int>(rollout.size()) != horizon)
    throw Error(ErrorCode::HorizonMismatch, "rollout has " + std::to_string(rollout.size()) +
                                                " frames, horizon is " + std::to_string(horizon));
  OccupancyMatrix m(ids_of(zones), horizon, source);
  for (int k = 1; k <= horizon; ++k) {
    const auto occ = occupancy_from_frame(rollout[static_cast<std::size_t>(k - 1)].agents, zones);
    for (std::size_t z = 0; z < zones.size(); ++z) m.set(z, k, occ[z]);
  }
  return m;
}

OccupancyMatrix ground_truth_occupancy(const FrameSeries& series, std::int64_t t,
                                       const std::vector<ConflictZone>& zones, int horizon) {
  std::vector<Frame> future;
  for (int k = 1; k <= horizon; ++k) {
    const Frame* f = series.at(t + k);
    if (!f)
      throw Error(ErrorCode::BackgroundExhausted,
                  "no background frame at t=" + std::to_string(t + k));
    future.push_back(*f);
  }
  return occupancy_series(future, zones, horizon, OccupancySource::GroundTruth);
}

void ClassificationReport::finalize() {
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  precision = ratio(static_cast<double>(tp), static_cast<double>(tp + fp));
  recall = ratio(static_cast<double>(tp), static_cast<double>(tp + fn));
  accuracy = ratio(static_cast<double>(tp + tn), static_cast<double>(total()));
  f1 = ratio(2.0 * precision * recall, precision + recall);
}

ClassificationReport occupancy_metrics(const std::vector<OccupancyMatrix>& pred,
                                       const std::vector<OccupancyMatrix>& truth, int step,
                                       const std::vector<int>& zone_filter) {
  if (pred.size() != truth.size())
    throw Error(ErrorCode::LengthMismatch, "prediction and truth streams differ in length");
  ClassificationReport r;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto& p = pred[i];
    const auto& t = truth[i];
    if (p.zone_ids() != t.zone_ids() || p.horizon() != t.horizon())
      throw Error(ErrorCode::LengthMismatch, "sample " + std::to_string(i) + " is not aligned");
    if (step < 1 || step > p.horizon())
      throw Error(ErrorCode::HorizonMismatch, "step outside horizon");
    for (std::size_t z = 0; z < p.zone_ids().size(); ++z) {
      if (!zone_filter.empty() &&
          std::find(zone_filter.begin(), zone_filter.end(), p.zone_ids()[z]) == zone_filter.end())
        continue;
      const bool pv = p.at(z, step), tv = t.at(z, step);
      if (pv && tv) ++r.tp;
      else if (pv) ++r.fp;
      else if (tv) ++r.fn;
      else ++r.tn;
    }
  }
  r.finalize();
  return r;
}

nlohmann::json to_json(const ClassificationReport& r) {
  return {{"tp", r.tp},
          {"fp", r.fp},
          {"tn", r.tn},
          {"fn", r.fn},
          {"precision", r.precision},
          {"recall", r.recall},
          {"accuracy", r.accuracy},
          {"f1", r.f1}};
}

nlohmann::json to_json(const OccupancyMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t z = 0; z < m.zone_ids().size(); ++z) {
    std::string row;
    for (int k = 1; k <= m.horizon(); ++k) row += m.at(z, k) ? '1' : '0';
    rows.push_back({{"zone", m.zone_ids()[z]}, {"steps", row}});
  }
  return rows;
}

OccupancyMatrix occupancy_from_json(const nlohmann::json& j, OccupancySource source) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::BadFormat, "occupancy must be a non-empty array");
  std::vector<int> ids;
  std::vector<std::string> rows;
  for (const auto& z : j) {
    ids.push_back(z.at("zone").get<int>());
    rows.push_back(z.at("steps").get<std::string>());
    if (rows.back().size() != rows.front().size())
      throw Error(ErrorCode::BadFormat, "occupancy rows differ in length");
  }
  OccupancyMatrix m(ids, static_cast<int>(rows.front().size()), source);
  for (std::size_t z = 0; z < rows.size(); ++z)
    for (std::size_t k = 0; k < rows[z].size(); ++k) {
      const char c = rows[z][k];
      if (c != '0' && c != '1') throw Error(ErrorCode::BadFormat, "occupancy steps must be 0/1");
      m.set(z, static_cast<int>(k) + 1, c == '1');
    }
  return m;
}

}  // namespace rosa
