#pragma once

#include "json.hpp"
#include "rosa/sim/simulator.hpp"

namespace rosa {

enum class Powertrain { ICE, BEV };

/// fuel rate [mL/s] = max(idle, c0 + c1 v + c2 v^3 + c3 max(0, a) v)
struct IceModel {
  double idle_rate = 0.3;
  double c0 = 0.2;
  double c1 = 0.03;
  double c2 = 1e-5;
  double c3 = 0.08;
  double co2_g_per_l = 2392.0;
};

struct BevModel {
  double mass = 1600.0;          // kg
  double f_roll = 150.0;         // N
  double c_aero = 0.4;           // N s^2 / m^2
  double eta_drive = 0.85;
  double eta_regen = 0.6;
  double regen_cap_w = 50000.0;  // W of braking power that can be recovered
  double aux_w = 300.0;
};

struct MetricsConfig {
  double stop_threshold = 0.1;  // m/s
  IceModel ice;
  BevModel bev;
};

nlohmann::json to_json(const MetricsConfig& c);
/// Missing keys keep their defaults.
MetricsConfig metrics_config_from_json(const nlohmann::json& j);

struct TripMetrics {
  double travel_time = 0.0;   // s
  double waiting_time = 0.0;  // s below the stop threshold
  int stops = 0;              // downward crossings of the threshold
  double fuel = 0.0;          // L
  double co2 = 0.0;           // g
  double bev_energy = 0.0;    // Wh
};

nlohmann::json to_json(const TripMetrics& m);

/// Per-second fuel rate in mL/s.
double ice_fuel_rate(const IceModel& m, double v, double a);
/// Battery power in W for one second at mean speed v and acceleration a.
double bev_power(const BevModel& m, double v, double a);

/// Each record stands for one second; the motion between consecutive
/// records drives fuel and energy. Throws EmptyLog.
TripMetrics trip_metrics(const TripLog& log, const MetricsConfig& config = {});

/// Same, reading only the speed trace.
TripMetrics speed_trace_metrics(const std::vector<double>& speeds, const MetricsConfig& config = {});

}  // namespace rosa
