#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "rosa/data/agent.hpp"
#include "rosa/zones/zone.hpp"

namespace rosa {

enum class OccupancySource { GroundTruth, Predicted, Oracle };

/// Zone x horizon-step boolean grid. Steps are 1-based: step k describes
/// the state k seconds after the reference time.
class OccupancyMatrix {
 public:
  OccupancyMatrix() = default;
  OccupancyMatrix(std::vector<int> zone_ids, int horizon, OccupancySource source);

  const std::vector<int>& zone_ids() const { return zone_ids_; }
  int horizon() const { return horizon_; }
  OccupancySource source() const { return source_; }

  bool at(std::size_t zone_index, int step) const;
  void set(std::size_t zone_index, int step, bool occupied);
  /// Occupancy of `zone_id` at `step`; throws HorizonMismatch for a step
  /// outside [1, horizon] and InvalidGeometry for an unknown zone.
  bool occupied(int zone_id, int step) const;
  std::size_t zone_index(int zone_id) const;

  bool operator==(const OccupancyMatrix& o) const {
    return zone_ids_ == o.zone_ids_ && horizon_ == o.horizon_ && values_ == o.values_;
  }

 private:
  std::vector<int> zone_ids_;
  int horizon_ = 0;
  OccupancySource source_ = OccupancySource::GroundTruth;
  std::vector<std::uint8_t> values_;
};

/// A zone is occupied iff an agent of its relevant class is inside; Entry
/// zones also require the vehicle to be on the circulating carriageway.
std::vector<bool> occupancy_from_frame(const std::vector<AgentState>& agents,
                                       const std::vector<ConflictZone>& zones);

/// One column per frame. Throws HorizonMismatch unless rollout.size() == horizon.
OccupancyMatrix occupancy_series(const std::vector<Frame>& rollout,
                                 const std::vector<ConflictZone>& zones, int horizon,
                                 OccupancySource source = OccupancySource::Predicted);

/// Ground truth for frames t+1 .. t+horizon of `series`. Throws
/// BackgroundExhausted if any of them is missing.
OccupancyMatrix ground_truth_occupancy(const FrameSeries& series, std::int64_t t,
                                       const std::vector<ConflictZone>& zones, int horizon);

struct ClassificationReport {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0, recall = 0.0, accuracy = 0.0, f1 = 0.0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  /// Recomputes the ratios; 0/0 is defined as 0.
  void finalize();
};

/// Binary classification at horizon `step` over all samples and all zones
/// whose id is in `zone_filter` (every zone when empty). Throws
/// LengthMismatch if the streams are not aligned.
ClassificationReport occupancy_metrics(const std::vector<OccupancyMatrix>& pred,
                                       const std::vector<OccupancyMatrix>& truth, int step,
                                       const std::vector<int>& zone_filter = {});

nlohmann::json to_json(const ClassificationReport& r);
nlohmann::json to_json(const OccupancyMatrix& m);
/// Inverse of to_json; the source is not stored. Throws BadFormat.
OccupancyMatrix occupancy_from_json(const nlohmann::json& j, OccupancySource source = OccupancySource::Predicted);

}  // namespace rosa
