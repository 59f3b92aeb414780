#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rosa/metrics/trip_metrics.hpp"
#include "rosa/sim/batch.hpp"

namespace rosa {

inline constexpr std::array<const char*, 6> kMetricNames = {
    "travel_time_s", "waiting_time_s", "stops", "fuel_l", "co2_g", "bev_energy_wh"};

std::array<double, 6> metric_values(const TripMetrics& m);

struct MetricSummary {
  double baseline = 0.0;  // category mean
  double advised = 0.0;
  /// (advised - baseline) / baseline in percent; absent when the baseline
  /// mean is zero and the advised mean is not.
  std::optional<double> delta_pct;
};

struct CategoryReport {
  std::size_t scenarios = 0;
  std::array<MetricSummary, 6> metrics;
};

struct BatchReport {
  std::string mode;
  CategoryReport optimizable;
  CategoryReport non_optimizable;
  CategoryReport all;
  std::size_t failed = 0;
};

/// Throws LengthMismatch for unaligned inputs, EmptyBatch for none.
BatchReport aggregate(const std::vector<TripMetrics>& baseline, const std::vector<TripMetrics>& advised,
                      const std::vector<bool>& optimizable);

/// Pairs up successful batch results; failed scenarios are counted only.
BatchReport aggregate_results(const std::vector<ScenarioResult>& results, const MetricsConfig& config = {});

/// Pairs baseline logs (mode "none") with advised logs by scenario id.
BatchReport aggregate_logs(const std::vector<TripLog>& logs, const MetricsConfig& config = {});

nlohmann::json to_json(const BatchReport& r);
std::string format_table(const BatchReport& r);

}  // namespace rosa
