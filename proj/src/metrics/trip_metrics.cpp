#include "rosa/metrics/trip_metrics.hpp"

#include <algorithm>

#include "rosa/error.hpp"

namespace rosa {

nlohmann::json to_json(const MetricsConfig& c) {
  return {{"stop_threshold", c.stop_threshold},
          {"ice",
           {{"idle_rate_ml_s", c.ice.idle_rate}, {"c0", c.ice.c0}, {"c1", c.ice.c1}, {"c2", c.ice.c2},
            {"c3", c.ice.c3}, {"co2_g_per_l", c.ice.co2_g_per_l}}},
          {"bev",
           {{"mass_kg", c.bev.mass}, {"f_roll_n", c.bev.f_roll}, {"c_aero", c.bev.c_aero},
            {"eta_drive", c.bev.eta_drive}, {"eta_regen", c.bev.eta_regen},
            {"regen_cap_w", c.bev.regen_cap_w}, {"aux_w", c.bev.aux_w}}}};
}

MetricsConfig metrics_config_from_json(const nlohmann::json& j) {
  MetricsConfig c;
  c.stop_threshold = j.value("stop_threshold", c.stop_threshold);
  if (j.contains("ice")) {
    const auto& i = j.at("ice");
    c.ice.idle_rate = i.value("idle_rate_ml_s", c.ice.idle_rate);
    c.ice.c0 = i.value("c0", c.ice.c0);
    c.ice.c1 = i.value("c1", c.ice.c1);
    c.ice.c2 = i.value("c2", c.ice.c2);
    c.ice.c3 = i.value("c3", c.ice.c3);
    c.ice.co2_g_per_l = i.value("co2_g_per_l", c.ice.co2_g_per_l);
  }
  if (j.contains("bev")) {
    const auto& b = j.at("bev");
    c.bev.mass = b.value("mass_kg", c.bev.mass);
    c.bev.f_roll = b.value("f_roll_n", c.bev.f_roll);
    c.bev.c_aero = b.value("c_aero", c.bev.c_aero);
    c.bev.eta_drive = b.value("eta_drive", c.bev.eta_drive);
    c.bev.eta_regen = b.value("eta_regen", c.bev.eta_regen);
    c.bev.regen_cap_w = b.value("regen_cap_w", c.bev.regen_cap_w);
    c.bev.aux_w = b.value("aux_w", c.bev.aux_w);
  }
  return c;
}

nlohmann::json to_json(const TripMetrics& m) {
  return {{"travel_time_s", m.travel_time}, {"waiting_time_s", m.waiting_time}, {"stops", m.stops},
          {"fuel_l", m.fuel},               {"co2_g", m.co2},                   {"bev_energy_wh", m.bev_energy}};
}

double ice_fuel_rate(const IceModel& m, double v, double a) {
  return std::max(m.idle_rate, m.c0 + m.c1 * v + m.c2 * v * v * v + m.c3 * std::max(0.0, a) * v);
}

double bev_power(const BevModel& m, double v, double a) {
  const double wheel = (m.mass * a + m.f_roll + m.c_aero * v * v) * v;
  const double battery = wheel >= 0.0 ? wheel / m.eta_drive
                                      : -std::min(-wheel, m.regen_cap_w) * m.eta_regen;
  return battery + m.aux_w;
}

TripMetrics speed_trace_metrics(const std::vector<double>& speeds, const MetricsConfig& c) {
  if (speeds.empty()) throw Error(ErrorCode::EmptyLog, "trip log has no records");
  TripMetrics m;
  m.travel_time = static_cast<double>(speeds.size() - 1);
  double fuel_ml = 0.0, energy_j = 0.0;
  for (std::size_t k = 0; k < speeds.size(); ++k) {
    const bool below = speeds[k] < c.stop_threshold;
    if (below) m.waiting_time += 1.0;
    if (below && k > 0 && speeds[k - 1] >= c.stop_threshold) ++m.stops;
    if (k + 1 < speeds.size()) {
      const double v = 0.5 * (speeds[k] + speeds[k + 1]);
      const double a = speeds[k + 1] - speeds[k];
      fuel_ml += ice_fuel_rate(c.ice, v, a);
      energy_j += bev_power(c.bev, v, a);
    }
  }
  m.fuel = fuel_ml / 1000.0;
  m.co2 = m.fuel * c.ice.co2_g_per_l;
  m.bev_energy = std::max(0.0, energy_j) / 3600.0;
  return m;
}

TripMetrics trip_metrics(const TripLog& log, const MetricsConfig& c) {
  std::vector<double> speeds;
  speeds.reserve(log.records.size());
  for (const auto& r : log.records) speeds.push_back(r.v);
  return speed_trace_metrics(speeds, c);
}

}  // namespace rosa
