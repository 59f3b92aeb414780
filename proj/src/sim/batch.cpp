#include "rosa/sim/batch.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "rosa/error.hpp"

namespace rosa {

std::vector<ScenarioResult> run_batch(const std::vector<ScenarioSpec>& specs,
                                      const PredictorSetting& advised, const SimConfig& config,
                                      int parallelism) {
  std::vector<ScenarioResult> results(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      ScenarioResult& r = results[i];
      r.id = specs[i].id;
      try {
        TripLog base = run_scenario(specs[i], {}, config);
        TripLog adv = run_scenario(specs[i], advised, config);
        base.optimizable = base.conflict;
        adv.optimizable = base.conflict;
        r.baseline = std::move(base);
        r.advised = std::move(adv);
      } catch (const Error& e) {
        r.error_code = std::string(to_string(e.code()));
        r.error = e.what();
      } catch (const std::exception& e) {
        r.error_code = "InternalError";
        r.error = e.what();
      }
    }
  };
  const int n = std::clamp(parallelism, 1, static_cast<int>(std::max<std::size_t>(1, specs.size())));
  std::vector<std::thread> threads;
  for (int k = 1; k < n; ++k) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace rosa
