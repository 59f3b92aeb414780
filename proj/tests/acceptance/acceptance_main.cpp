// One line per acceptance criterion; exit status 1 if any fails.
// Usage: rosa_acceptance <path to rosa binary> [scratch dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rosa/advisory/rosa.hpp"
#include "rosa/data/split.hpp"
#include "rosa/data/synthetic.hpp"
#include "rosa/metrics/report.hpp"
#include "rosa/predictor/evaluation.hpp"
#include "rosa/predictor/gradcheck.hpp"
#include "rosa/predictor/mask.hpp"
#include "rosa/predictor/rollout.hpp"
#include "rosa/predictor/samples.hpp"
#include "rosa/predictor/train.hpp"
#include "rosa/rng.hpp"
#include "rosa/sim/batch.hpp"
#include "rosa/sim/suite.hpp"

namespace fs = std::filesystem;
using namespace rosa;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s C%d %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// ---- C1: attention mask --------------------------------------------------------

void criterion_mask() {
  const auto t0 = Clock::now();
  std::size_t checked = 0, wrong = 0;
  for (int n = 1; n <= 5; ++n)
    for (int l = 1; l <= 4; ++l)
      for (unsigned pattern = 0; pattern < (1u << n); ++pattern) {
        std::vector<bool> valid(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) valid[static_cast<std::size_t>(a)] = (pattern >> a) & 1u;
        const auto mask = build_attention_mask(n, l, valid);
        for (int qa = 0; qa < n; ++qa)
          for (int ql = 0; ql < l; ++ql)
            for (int ka = 0; ka < n; ++ka)
              for (int kl = 0; kl < l; ++kl) {
                const bool expect = valid[static_cast<std::size_t>(qa)] && valid[static_cast<std::size_t>(ka)] &&
                                    (qa == ka || ql == kl);
                ++checked;
                if (mask.allowed(qa * l + ql, ka * l + kl) != expect) ++wrong;
              }
      }
  const double dt = seconds_since(t0);
  verdict(1, wrong == 0 && dt < 1.0, "attention mask exhaustive for N<=5, L<=4",
          std::to_string(checked) + " entries, " + std::to_string(wrong) + " wrong, " + fmt("%.3f s", dt));
}

// ---- C2: gradient check -----------------------------------------------------------

void criterion_gradcheck(const std::vector<FrameSeries>& corpus, const RoundaboutGeometry& geo) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string detail;
  for (auto variant : {FeatureVariant::PositionType, FeatureVariant::Dynamics, FeatureVariant::DynamicsExit}) {
    ModelConfig cfg;
    cfg.features.variant = variant;
    cfg.norm = Normalizer::from_geometry(geo);
    auto samples = build_samples(corpus.front(), cfg);
    samples.resize(std::min<std::size_t>(samples.size(), 4));
    const auto params = ModelParameters::initialize(cfg, 5);
    const auto r = gradient_check(params, samples, 1e-5, 200, 9);
    worst = std::max(worst, r.max_rel_error);
    detail += std::string(to_string(variant)) + fmt(" %.2e (%g coords) ", r.max_rel_error,
                                                     static_cast<double>(r.coords_checked));
  }
  const double dt = seconds_since(t0);
  verdict(2, worst < 1e-4 && dt < 30.0, "gradient check eps=1e-5, 200 coords, rel err < 1e-4",
          detail + fmt("%.1f s", dt));
}

// ---- C3: advisory closure --------------------------------------------------------------

void criterion_closure() {
  Rng rng(derive_seed(3, "closure"));
  const AdvisoryParams p;
  int cases = 0, bad = 0;
  double worst_arrival = 0.0, worst_decel = 0.0;
  while (cases < 50) {
    const double v = rng.uniform(1.0, p.v_max);
    const double d = v * rng.uniform(0.2, 4.0);
    const int t = static_cast<int>(std::ceil(d / v - 1e-9));
    const double target = 2.0 * d / (t + 1) - v;
    // feasible domain: target reachable without clamping or exceeding the decel limit
    if (target < 0.0 || target > p.v_max || (v - target) / (t + 1) > p.a_dec_max) continue;
    ++cases;

    AdvisoryInput in;
    in.v = v;
    in.d_c = d;
    in.d_e = d + 8.0;
    in.crosswalk_zone = 0;
    in.entry_zone = 3;
    in.occupancy = OccupancyMatrix({0, 3}, 5, OccupancySource::Oracle);
    in.occupancy.set(0, t, true);
    const auto out = rosa_step(in, p);
    if (!out.advised_speed) {
      ++bad;
      continue;
    }
    // follow the advice with constant acceleration over t+1 seconds
    const double a = (*out.advised_speed - v) / (t + 1);
    double x = 0.0, vel = v, time = 0.0;
    const double h = 1e-4;
    while (x < d && time < 20.0) {
      const double nv = std::max(0.0, vel + a * h);
      x += 0.5 * (vel + nv) * h;
      vel = nv;
      time += h;
    }
    const double arrival_err = std::abs(time - (t + 1));
    worst_arrival = std::max(worst_arrival, arrival_err);
    worst_decel = std::max(worst_decel, -a);
    if (arrival_err > 0.5 || -a > 2.0 + 1e-9) ++bad;
  }
  verdict(3, bad == 0, "advisory speed 2d/(t+1)-v closure over 50 (d,v) with d/v<=4",
          fmt("max |arrival - (t+1)| %.3f s, max decel %.3f m/s^2, ", worst_arrival, worst_decel) +
              std::to_string(bad) + " bad");
}

// ---- C4: ground-truth oracle -------------------------------------------------------------

void criterion_oracle(const std::vector<FrameSeries>& test, const RoundaboutGeometry& geo) {
  const auto r = prediction_report([](const FrameSeries& s) { return std::make_unique<OraclePredictor>(s); }, test,
                                   geo, {});
  bool ok = r.samples > 0;
  double max_err = 0.0;
  for (const auto& e : r.displacement) max_err = std::max({max_err, e.ade, e.fde});
  ok = ok && max_err == 0.0;
  std::uint64_t tp = 0, errors = 0;
  for (const auto* cls : {&r.crosswalk, &r.entry})
    for (const auto& c : *cls) {
      tp += c.tp;
      errors += c.fp + c.fn;
      ok = ok && c.tp > 0 && c.precision == 1.0 && c.recall == 1.0;
    }
  verdict(4, ok, "ground-truth predictor: precision = recall = 1, ADE = FDE = 0",
          std::to_string(r.samples) + " samples, " + std::to_string(tp) + " true positives, " +
              std::to_string(errors) + " misclassified, " + fmt("max ADE/FDE %.3g", max_err));
}

// ---- C5: ablation --------------------------------------------------------------------------

bool monotone(const PredictionReport& r) {
  for (std::size_t k = 1; k < r.displacement.size(); ++k)
    if (r.displacement[k].ade < r.displacement[k - 1].ade || r.displacement[k].fde < r.displacement[k - 1].fde)
      return false;
  return true;
}

std::shared_ptr<const ModelParameters> criterion_ablation(const std::vector<FrameSeries>& corpus,
                                                          const DatasetSplit& split, const std::vector<FrameSeries>& test,
                                                          const RoundaboutGeometry& geo) {
  double train_seconds = 0.0;
  std::vector<PredictionReport> reports;
  std::shared_ptr<const ModelParameters> v2;
  for (auto variant : {FeatureVariant::PositionType, FeatureVariant::Dynamics}) {
    ModelConfig cfg;
    cfg.features.variant = variant;
    cfg.norm = Normalizer::from_geometry(geo);
    const auto t0 = Clock::now();
    const auto result = train(build_samples(corpus, split.train, cfg), build_samples(corpus, split.val, cfg), cfg);
    train_seconds += seconds_since(t0);
    auto params = std::make_shared<const ModelParameters>(result.params);
    reports.push_back(prediction_report(TransformerPredictor(params), test, geo, {}));
    if (variant == FeatureVariant::Dynamics) v2 = params;
  }
  const double ade1 = reports[0].displacement.back().ade, ade2 = reports[1].displacement.back().ade;
  const bool ok = ade2 < ade1 && monotone(reports[0]) && monotone(reports[1]) && train_seconds <= 600.0;
  verdict(5, ok, "ablation on " + std::to_string(corpus.size()) + " synthetic scenarios",
          fmt("5 s ADE position %.3f m, dynamics %.3f m; ", ade1, ade2) + "monotone " +
              (monotone(reports[0]) ? "yes" : "no") + "/" + (monotone(reports[1]) ? "yes" : "no") +
              fmt("; training %.0f s", train_seconds));
  return v2;
}

// ---- C6-C8: suite ---------------------------------------------------------------------------

int count_violations(const std::vector<ScenarioResult>& results, const std::vector<ScenarioSpec>& specs,
                     const SimConfig& cfg) {
  int total = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) continue;
    total += check_safety(*results[i].baseline, specs[i], cfg).total();
    total += check_safety(*results[i].advised, specs[i], cfg).total();
  }
  return total;
}

const MetricSummary& metric(const CategoryReport& c, const char* name) {
  for (std::size_t k = 0; k < kMetricNames.size(); ++k)
    if (std::string_view(kMetricNames[k]) == name) return c.metrics[k];
  std::abort();
}

std::string pct(const MetricSummary& m) {
  return m.delta_pct ? fmt("%+.1f%%", *m.delta_pct) : std::string("n/a");
}

void criterion_suite(std::shared_ptr<const ModelParameters> model, int& violations, std::size_t& runs) {
  auto geo = std::make_shared<const RoundaboutGeometry>(default_geometry());
  const SimConfig cfg;
  const auto t0 = Clock::now();
  const auto suite = make_suite(*geo, SuiteOptions{});
  std::vector<ScenarioSpec> specs;
  for (const auto& s : suite) specs.push_back(to_scenario(s, geo));
  const auto gt = run_batch(specs, {PredictorMode::GroundTruth, nullptr}, cfg, 1);
  const double dt = seconds_since(t0);
  const auto rep = aggregate_results(gt);

  bool zero = rep.failed == 0;
  for (const auto& m : rep.non_optimizable.metrics) zero = zero && m.delta_pct && *m.delta_pct == 0.0;
  const auto& stops = metric(rep.optimizable, "stops");
  const auto& wait = metric(rep.optimizable, "waiting_time_s");
  const double share = static_cast<double>(rep.optimizable.scenarios) / static_cast<double>(suite.size());
  const bool ok6 = suite.size() == 100 && share >= 0.15 && share <= 0.25 && stops.delta_pct && *stops.delta_pct <= -80.0 &&
                   wait.delta_pct && *wait.delta_pct <= -80.0 && zero && dt < 120.0;
  verdict(6, ok6, "perfect foresight on the 100-scenario suite",
          std::to_string(rep.optimizable.scenarios) + " optimizable; stops " + pct(stops) + ", waiting " + pct(wait) +
              "; non-optimizable deltas all zero: " + (zero ? "yes" : "no") + fmt("; %.1f s", dt));
  violations += count_violations(gt, specs, cfg);
  runs += 2 * gt.size();

  if (!model) {
    verdict(7, false, "trained dynamics model on the suite", "no model");
    return;
  }
  const auto md = run_batch(specs, {PredictorMode::Model, model}, cfg, 1);
  const auto rm = aggregate_results(md);
  const auto& mstops = metric(rm.optimizable, "stops");
  bool bounded = rm.failed == 0;
  std::string worst = "non-optimizable:";
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
    const auto& m = rm.non_optimizable.metrics[k];
    bounded = bounded && m.delta_pct && *m.delta_pct <= 5.0;
    worst += " " + std::string(kMetricNames[k]) + " " + pct(m);
  }
  const bool ok7 = mstops.delta_pct && *mstops.delta_pct < 0.0 && bounded;
  verdict(7, ok7, "trained dynamics model on the suite",
          "optimizable stops " + pct(mstops) + "; " + worst);
  violations += count_violations(md, specs, cfg);
  runs += 2 * md.size();
}

// ---- C9: reproducibility ----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run(const std::string& cmd) {
  const std::string full = cmd + " >/dev/null 2>&1";
  return std::system(full.c_str());
}

/// Runs the full CLI pipeline into `out`; returns false on a nonzero exit.
bool pipeline(const std::string& rosa, const fs::path& work, const fs::path& out, int jobs) {
  const std::string o = out.string();
  const std::string spec = (work / "corpus.json").string();
  return run(rosa + " preprocess --synthetic " + spec + " --seed 5 --out " + o + "/data") == 0 &&
         run(rosa + " train --data " + o + "/data --variant dynamics --seed 42 --epochs 1 --out " + o + "/model") == 0 &&
         run(rosa + " eval-prediction --data " + o + "/data --predictor model:" + o + "/model/params.bin --out " + o + "/pred") == 0 &&
         run(rosa + " eval-occupancy --data " + o + "/data --predictor model:" + o + "/model/params.bin --out " + o + "/occ") == 0 &&
         run(rosa + " make-suite --count 8 --fraction 0.5 --seed 3 --out " + o + "/suite") == 0 &&
         run(rosa + " simulate --manifest " + o + "/suite/manifest.json --predictor model:" + o +
             "/model/params.bin --jobs " + std::to_string(jobs) + " --out " + o + "/sim") == 0 &&
         run(rosa + " report --logs " + o + "/sim/triplogs.jsonl --out " + o + "/report") == 0;
}

void criterion_reproducible(const std::string& rosa, const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  std::ofstream(work / "corpus.json") << R"({"corpus": {"count": 12, "duration": 40, "seed": 9}})";
  // same command lines into the same folder; the first run is kept aside
  bool ran = pipeline(rosa, work, work / "run", 1);
  if (ran) {
    fs::rename(work / "run", work / "first");
    ran = pipeline(rosa, work, work / "run", 3);
  }
  const fs::path a = work / "first", b = work / "run";
  std::size_t files = 0, differing = 0, sidecars = 0;
  if (ran) {
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (!e.is_regular_file()) continue;
      const auto rel = fs::relative(e.path(), a);
      if (rel.filename() == "timestamp.json") {
        ++sidecars;
        continue;
      }
      ++files;
      const auto other = b / rel;
      if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
        ++differing;
        std::printf("  differs: %s\n", rel.string().c_str());
      }
    }
    for (const auto& e : fs::recursive_directory_iterator(b))
      if (e.is_regular_file() && !fs::exists(a / fs::relative(e.path(), b))) ++differing;
  }
  verdict(9, ran && files > 0 && differing == 0, "byte-identical outputs across reruns (simulate --jobs 1 vs 3)",
          ran ? std::to_string(files) + " files compared, " + std::to_string(differing) + " differ, " +
                    std::to_string(sidecars) + " timestamp sidecars skipped"
              : std::string("a CLI step failed"));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <rosa binary> [scratch dir]\n", argv[0]);
    return 2;
  }
  const std::string rosa = argv[1];
  const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "rosa-acceptance";

  const auto geo = default_geometry();
  const auto corpus = synthetic_corpus(geo, CorpusOptions{});
  const auto split = split_dataset(corpus, {}, 42);
  std::vector<FrameSeries> test;
  for (auto i : split.test) test.push_back(corpus[i]);

  criterion_mask();
  criterion_gradcheck(corpus, geo);
  criterion_closure();
  criterion_oracle(test, geo);
  const auto model = criterion_ablation(corpus, split, test, geo);
  int violations = 0;
  std::size_t runs = 0;
  criterion_suite(model, violations, runs);
  verdict(8, violations == 0 && runs > 0, "no ego/VRU crosswalk or ego/vehicle entry co-occupancy",
          std::to_string(violations) + " violations over " + std::to_string(runs) + " trips");
  criterion_reproducible(rosa, work);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
