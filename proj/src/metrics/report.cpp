#include "rosa/metrics/report.hpp"

#include <cstdio>
#include <map>

#include "rosa/error.hpp"

namespace rosa {

std::array<double, 6> metric_values(const TripMetrics& m) {
  return {m.travel_time, m.waiting_time, static_cast<double>(m.stops), m.fuel, m.co2, m.bev_energy};
}

namespace {

CategoryReport summarize(const std::vector<TripMetrics>& base, const std::vector<TripMetrics>& adv,
                         const std::vector<bool>& flags, int want) {
  CategoryReport c;
  std::array<double, 6> sb{}, sa{};
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (want >= 0 && flags[i] != (want == 1)) continue;
    ++c.scenarios;
    const auto b = metric_values(base[i]);
    const auto a = metric_values(adv[i]);
    for (std::size_t k = 0; k < 6; ++k) {
      sb[k] += b[k];
      sa[k] += a[k];
    }
  }
  for (std::size_t k = 0; k < 6; ++k) {
    auto& m = c.metrics[k];
    if (c.scenarios == 0) continue;
    m.baseline = sb[k] / static_cast<double>(c.scenarios);
    m.advised = sa[k] / static_cast<double>(c.scenarios);
    if (sb[k] != 0.0) m.delta_pct = 100.0 * (sa[k] - sb[k]) / sb[k];
    else if (sa[k] == 0.0) m.delta_pct = 0.0;
  }
  return c;
}

}  // namespace

BatchReport aggregate(const std::vector<TripMetrics>& baseline, const std::vector<TripMetrics>& advised,
                      const std::vector<bool>& optimizable) {
  if (baseline.size() != advised.size() || baseline.size() != optimizable.size())
    throw Error(ErrorCode::LengthMismatch, "baseline, advised and flag lists differ in length");
  if (baseline.empty()) throw Error(ErrorCode::EmptyBatch, "no scenario results to aggregate");
  BatchReport r;
  r.optimizable = summarize(baseline, advised, optimizable, 1);
  r.non_optimizable = summarize(baseline, advised, optimizable, 0);
  r.all = summarize(baseline, advised, optimizable, -1);
  return r;
}

BatchReport aggregate_results(const std::vector<ScenarioResult>& results, const MetricsConfig& config) {
  std::vector<TripMetrics> base, adv;
  std::vector<bool> flags;
  std::size_t failed = 0;
  std::string mode;
  for (const auto& r : results) {
    if (!r.ok()) {
      ++failed;
      continue;
    }
    base.push_back(trip_metrics(*r.baseline, config));
    adv.push_back(trip_metrics(*r.advised, config));
    flags.push_back(r.baseline->optimizable);
    mode = r.advised->mode;
  }
  BatchReport rep = aggregate(base, adv, flags);
  rep.mode = mode;
  rep.failed = failed;
  return rep;
}

BatchReport aggregate_logs(const std::vector<TripLog>& logs, const MetricsConfig& config) {
  std::map<std::string, const TripLog*> base;
  std::vector<const TripLog*> adv;
  for (const auto& l : logs) {
    if (l.mode == "none") base[l.scenario] = &l;
    else adv.push_back(&l);
  }
  std::vector<TripMetrics> mb, ma;
  std::vector<bool> flags;
  std::string mode;
  for (const TripLog* a : adv) {
    auto it = base.find(a->scenario);
    if (it == base.end())
      throw Error(ErrorCode::LengthMismatch, "no baseline log for scenario " + a->scenario);
    mb.push_back(trip_metrics(*it->second, config));
    ma.push_back(trip_metrics(*a, config));
    flags.push_back(it->second->conflict);
    mode = a->mode;
  }
  if (!logs.empty() && adv.empty() && base.size() > 0)
    throw Error(ErrorCode::LengthMismatch, "trip logs contain baseline runs only");
  BatchReport rep = aggregate(mb, ma, flags);
  rep.mode = mode;
  return rep;
}

namespace {

nlohmann::json to_json(const CategoryReport& c) {
  nlohmann::json metrics = nlohmann::json::object();
  for (std::size_t k = 0; k < 6; ++k) {
    const auto& m = c.metrics[k];
    metrics[kMetricNames[k]] = {{"baseline", m.baseline},
                                {"advised", m.advised},
                                {"delta_pct", m.delta_pct ? nlohmann::json(*m.delta_pct) : nlohmann::json("n/a")}};
  }
  return {{"scenarios", c.scenarios}, {"metrics", metrics}};
}

}  // namespace

nlohmann::json to_json(const BatchReport& r) {
  return {{"mode", r.mode},
          {"failed", r.failed},
          {"categories",
           {{"optimizable", to_json(r.optimizable)},
            {"non_optimizable", to_json(r.non_optimizable)},
            {"all", to_json(r.all)}}}};
}

std::string format_table(const BatchReport& r) {
  static constexpr const char* labels[6] = {"Travel time", "Waiting time", "Stops",
                                            "Fuel",        "CO2",          "BEV energy"};
  auto cell = [](const MetricSummary& m) {
    char buf[32];
    if (!m.delta_pct) return std::string("     n/a");
    std::snprintf(buf, sizeof buf, "%+8.2f%%", *m.delta_pct);
    return std::string(buf);
  };
  std::string out = "mode: " + r.mode + "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %14s %18s %10s\n", "metric", "optimizable", "non-optimizable", "all");
  out += line;
  std::snprintf(line, sizeof line, "%-14s %14zu %18zu %10zu\n", "scenarios", r.optimizable.scenarios,
                r.non_optimizable.scenarios, r.all.scenarios);
  out += line;
  for (std::size_t k = 0; k < 6; ++k) {
    std::snprintf(line, sizeof line, "%-14s %14s %18s %10s\n", labels[k], cell(r.optimizable.metrics[k]).c_str(),
                  cell(r.non_optimizable.metrics[k]).c_str(), cell(r.all.metrics[k]).c_str());
    out += line;
  }
  if (r.failed) out += "failed scenarios: " + std::to_string(r.failed) + "\n";
  return out;
}

}  // namespace rosa
