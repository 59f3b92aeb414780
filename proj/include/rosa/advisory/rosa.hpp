#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "rosa/zones/occupancy.hpp"

namespace rosa {

/// Basis for the entry arrival time t_e.
enum class EntryTimeBasis {
  CurrentSpeed,     // t_e from d_e and the current speed v
  CrosswalkAdvice,  // t_e from d_e and v_opt^c
};

struct AdvisoryParams {
  double v_max = 13.89;      // m/s, 50 km/h
  double a_dec_max = 2.0;    // m/s^2
  double a_acc_max = 2.5;    // m/s^2
  double v_stop = 0.1;       // m/s; below this the advisory abstains
  EntryTimeBasis entry_time_basis = EntryTimeBasis::CurrentSpeed;
};

enum class AdvisoryStage { NotTriggered, CrosswalkOnly, CrosswalkAndEntry };

std::string_view to_string(AdvisoryStage s);

struct AdvisoryInput {
  double v = 0.0;    // m/s
  double d_c = 0.0;  // m to the crosswalk
  double d_e = 0.0;  // m to the entry
  OccupancyMatrix occupancy;
  int crosswalk_zone = 0;
  int entry_zone = 0;
  /// Ego already on or past the crosswalk: only the entry stage runs.
  bool crosswalk_passed = false;
};

struct ZoneTrace {
  int zone_id = 0;
  ZoneKind kind = ZoneKind::Crosswalk;
  std::optional<int> arrival_step;
  bool beyond_horizon = false;  // arrival step > m, assumed clear
  bool occupied = false;
  double target_speed = 0.0;
};

struct AdvisoryOutput {
  std::optional<double> advised_speed;
  AdvisoryStage stage = AdvisoryStage::NotTriggered;
  std::vector<ZoneTrace> rationale;
};

nlohmann::json to_json(const AdvisoryOutput& out);

/// ceil(d / v) in whole seconds; nullopt when v <= v_stop. Throws NegativeDistance.
std::optional<int> time_to_arrival(double d, double v, double v_stop = 0.1);

/// 2d/t - v clamped to [0, v_max]. Throws NonPositiveTime, NegativeDistance.
double optimal_speed(double d, double t, double v, double v_max = 13.89);

/// One advisory decision. Throws HorizonMismatch via the occupancy lookup.
AdvisoryOutput rosa_step(const AdvisoryInput& in, const AdvisoryParams& p = {});

/// Clamp to the actuator envelope, then to [0, v_max].
double apply_decel_limit(double v_now, double v_advised, double dt = 1.0, double a_dec_max = 2.0,
                         double a_acc_max = 2.5, double v_max = 13.89);

}  // namespace rosa
