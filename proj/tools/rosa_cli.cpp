#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rosa/data/csv.hpp"
#include "rosa/data/preprocess.hpp"
#include "rosa/data/series_io.hpp"
#include "rosa/data/split.hpp"
#include "rosa/data/synthetic.hpp"
#include "rosa/error.hpp"
#include "rosa/metrics/report.hpp"
#include "rosa/predictor/evaluation.hpp"
#include "rosa/predictor/rollout.hpp"
#include "rosa/predictor/samples.hpp"
#include "rosa/predictor/serialize.hpp"
#include "rosa/predictor/train.hpp"
#include "rosa/sim/batch.hpp"
#include "rosa/sim/io.hpp"
#include "rosa/sim/suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rosa;

namespace {

// ---- logging ---------------------------------------------------------------

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
  const char* env = std::getenv("ROSA_LOG");
  const std::string v = env ? env : "warn";
  if (v == "error") return Level::Error;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::Warn;
}

void log(Level level, const std::string& msg) {
  static const Level threshold = log_level();
  if (level > threshold) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[rosa " << names[static_cast<int>(level)] << "] " << msg << '\n';
}

// ---- io helpers --------------------------------------------------------------

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFormat, path.string() + ": " + e.what());
  }
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Output folder with the resolved config; the wall-clock time goes to a
/// separate sidecar so every other file is reproducible.
class Run {
 public:
  Run(const std::string& out, std::string command) : dir_(out), command_(std::move(command)), started_(utc_now()) {
    fs::create_directories(dir_);
  }

  const fs::path& dir() const { return dir_; }

  void finish(const json& config) {
    json resolved = config;
    resolved["command"] = command_;
    write_json(dir_ / "config.json", resolved);
    write_json(dir_ / "timestamp.json", {{"command", command_}, {"started", started_}, {"finished", utc_now()}});
  }

 private:
  fs::path dir_;
  std::string command_;
  std::string started_;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json j = read_json(path);
  if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, path + ": config must be a JSON object");
  return j;
}

json section(const json& config, const char* key) {
  return config.contains(key) ? config.at(key) : json::object();
}

SplitFractions fractions_from_json(const json& j) {
  SplitFractions f;
  f.train = j.value("train", f.train);
  f.val = j.value("val", f.val);
  f.test = j.value("test", f.test);
  return f;
}

ColumnMap columns_from_json(const json& j) {
  ColumnMap c;
  c.agent_id = j.value("agent_id", c.agent_id);
  c.time = j.value("time", c.time);
  c.cls = j.value("class", c.cls);
  c.x = j.value("x", c.x);
  c.y = j.value("y", c.y);
  c.speed = j.value("speed", c.speed);
  c.a_tan = j.value("a_tan", c.a_tan);
  c.a_lat = j.value("a_lat", c.a_lat);
  c.heading = j.value("heading", c.heading);
  c.time_in_seconds = j.value("time_in_seconds", c.time_in_seconds);
  c.heading_in_degrees = j.value("heading_in_degrees", c.heading_in_degrees);
  return c;
}

json to_json(const ColumnMap& c) {
  return {{"agent_id", c.agent_id}, {"time", c.time},   {"class", c.cls},          {"x", c.x},
          {"y", c.y},               {"speed", c.speed}, {"a_tan", c.a_tan},        {"a_lat", c.a_lat},
          {"heading", c.heading},   {"time_in_seconds", c.time_in_seconds},
          {"heading_in_degrees", c.heading_in_degrees}};
}

json to_json(const SafetyReport& r) {
  return {{"crosswalk_violations", r.crosswalk_violations}, {"entry_violations", r.entry_violations}};
}

// ---- dataset folder ------------------------------------------------------------

struct Dataset {
  RoundaboutGeometry geometry;
  std::vector<FrameSeries> segments;
  DatasetSplit split;
};

Dataset load_dataset(const fs::path& dir) {
  const json meta = read_json(dir / "dataset.json");
  Dataset d;
  d.geometry = load_geometry(dir / meta.at("geometry").get<std::string>());
  for (const auto& name : meta.at("segments")) d.segments.push_back(load_series(dir / name.get<std::string>()));
  d.split = split_from_json(meta.at("split"));
  for (const auto* part : {&d.split.train, &d.split.val, &d.split.test})
    for (auto i : *part)
      if (i >= d.segments.size()) throw Error(ErrorCode::BadFormat, "split index out of range in " + (dir / "dataset.json").string());
  return d;
}

const std::vector<std::size_t>& split_part(const DatasetSplit& split, const std::string& name) {
  if (name == "train") return split.train;
  if (name == "val") return split.val;
  return split.test;
}

std::shared_ptr<const ModelParameters> load_model(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::IoError, "model file not found: " + path);
  return std::make_shared<const ModelParameters>(load_parameters(path));
}

// ---- preprocess -------------------------------------------------------------

struct PreprocessArgs {
  std::vector<std::string> inputs;
  std::string geometry;
  std::string synthetic;
  double hz = 25.0;
  int segment = 60;
};

int cmd_preprocess(const PreprocessArgs& a, const json& config, std::uint64_t seed, const std::string& out) {
  if (a.inputs.empty() == a.synthetic.empty())
    throw Error(ErrorCode::InvalidSpec, "give either --input or --synthetic");
  if (a.segment < 1) throw Error(ErrorCode::InvalidSpec, "--segment must be positive");

  json resolved = {{"seed", seed}, {"segment", a.segment}};
  RoundaboutGeometry geo = default_geometry();
  if (!a.geometry.empty()) {
    if (!fs::exists(a.geometry)) throw Error(ErrorCode::IoError, "geometry file not found: " + a.geometry);
    geo = load_geometry(a.geometry);
    resolved["geometry"] = a.geometry;
  } else if (!a.inputs.empty()) {
    throw Error(ErrorCode::InvalidSpec, "--geometry is required with --input");
  }

  std::vector<FrameSeries> segments;
  if (!a.synthetic.empty()) {
    const json spec = read_json(a.synthetic);
    resolved["synthetic"] = a.synthetic;
    if (spec.contains("corpus")) {
      const auto opt = corpus_options_from_json(spec.at("corpus"));
      resolved["corpus"] = to_json(opt);
      log(Level::Info, "generating " + std::to_string(opt.count) + " synthetic scenarios");
      segments = synthetic_corpus(geo, opt);
    } else {
      const auto traffic = traffic_spec_from_json(spec.at("traffic"));
      const std::uint64_t traffic_seed = spec.value("seed", seed);
      resolved["traffic"] = to_json(traffic);
      resolved["traffic_seed"] = traffic_seed;
      segments = segment_series(generate_synthetic_scenario(geo, traffic, traffic_seed),
                                static_cast<std::size_t>(a.segment));
    }
  } else {
    const ColumnMap columns = columns_from_json(section(config, "columns"));
    resolved["inputs"] = a.inputs;
    resolved["hz"] = a.hz;
    resolved["columns"] = to_json(columns);
    for (const auto& path : a.inputs) {
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
      RawTrajectorySet raw;
      try {
        raw = parse_trajectory_file(in, columns, a.hz);
      } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
      }
      const auto series = infer_exit_labels(downsample(raw, a.hz, 1.0), geo);
      auto segs = segment_series(series, static_cast<std::size_t>(a.segment));
      log(Level::Info, path + ": " + std::to_string(segs.size()) + " segments");
      segments.insert(segments.end(), std::make_move_iterator(segs.begin()), std::make_move_iterator(segs.end()));
    }
  }

  const auto fractions = fractions_from_json(section(config, "split"));
  const auto split = split_dataset(segments, fractions, seed);
  resolved["split"] = {{"train", fractions.train}, {"val", fractions.val}, {"test", fractions.test}};

  Run run(out, "preprocess");
  fs::create_directories(run.dir() / "segments");
  json names = json::array();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "segments/%05zu.jsonl", i);
    save_series(run.dir() / name, segments[i]);
    names.push_back(name);
  }
  {
    std::ostringstream g;
    write_geometry(g, geo);
    write_text(run.dir() / "geometry.txt", g.str());
  }
  write_json(run.dir() / "dataset.json", {{"geometry", "geometry.txt"}, {"segments", names}, {"split", to_json(split)}});
  run.finish(resolved);
  log(Level::Info, std::to_string(segments.size()) + " segments, split " + std::to_string(split.train.size()) + "/" +
                       std::to_string(split.val.size()) + "/" + std::to_string(split.test.size()));
  return 0;
}

// ---- train ------------------------------------------------------------------

int cmd_train(const std::string& data, const std::string& variant, std::optional<int> epochs, const json& config,
              std::uint64_t seed, const std::string& out) {
  const Dataset ds = load_dataset(data);
  ModelConfig cfg = model_config_from_json(section(config, "model"));
  if (!section(config, "model").contains("norm")) cfg.norm = Normalizer::from_geometry(ds.geometry);
  cfg.features.num_arms = static_cast<int>(ds.geometry.arms.size());
  if (!variant.empty()) cfg.features.variant = parse_variant(variant);
  if (epochs) cfg.epochs = *epochs;
  cfg.seed = seed;
  cfg.validate();

  const auto train_set = build_samples(ds.segments, ds.split.train, cfg);
  const auto val_set = build_samples(ds.segments, ds.split.val, cfg);
  log(Level::Info, "samples " + std::to_string(train_set.size()) + " train / " + std::to_string(val_set.size()) + " val");
  const auto result = train(train_set, val_set, cfg, [](const EpochRecord& e) {
    std::ostringstream msg;
    msg << "epoch " << e.epoch << " train " << e.train_loss << " val " << e.val_loss;
    log(Level::Info, msg.str());
  });

  Run run(out, "train");
  save_parameters((run.dir() / "params.bin").string(), result.params);
  write_json(run.dir() / "history.json", to_json(result.history));
  run.finish({{"data", data}, {"model", to_json(cfg)}});
  return 0;
}

// ---- evaluation -----------------------------------------------------------------

PredictionReport evaluate(const std::string& data, const std::string& split_name, const std::string& predictor,
                          int stride, json& resolved) {
  const Dataset ds = load_dataset(data);
  std::vector<FrameSeries> series;
  for (auto i : split_part(ds.split, split_name)) series.push_back(ds.segments[i]);
  if (series.empty()) throw Error(ErrorCode::EmptyDataset, "split '" + split_name + "' is empty");

  EvaluationOptions opt;
  opt.stride = stride;
  resolved = {{"data", data}, {"split", split_name}, {"predictor", predictor}, {"stride", stride}};
  if (predictor == "ground-truth") {
    resolved["history"] = opt.history;
    resolved["horizon"] = opt.horizon;
    return prediction_report([](const FrameSeries& s) { return std::make_unique<OraclePredictor>(s); }, series,
                             ds.geometry, opt);
  }
  if (predictor == "constant-velocity") {
    resolved["history"] = opt.history;
    resolved["horizon"] = opt.horizon;
    return prediction_report(ConstantVelocityPredictor(opt.history + 1), series, ds.geometry, opt);
  }
  if (predictor.rfind("model:", 0) == 0) {
    const auto params = load_model(predictor.substr(6));
    opt.history = params->config().history;
    opt.horizon = params->config().horizon;
    resolved["history"] = opt.history;
    resolved["horizon"] = opt.horizon;
    resolved["model"] = to_json(params->config());
    return prediction_report(TransformerPredictor(params), series, ds.geometry, opt);
  }
  throw Error(ErrorCode::InvalidSpec, "unknown predictor '" + predictor + "'");
}

int cmd_eval_prediction(const std::string& data, const std::string& split, const std::string& predictor, int stride,
                        const std::string& out) {
  json resolved;
  const auto report = evaluate(data, split, predictor, stride, resolved);
  Run run(out, "eval-prediction");
  json j = {{"predictor", report.predictor}, {"samples", report.samples}, {"horizon", report.horizon}};
  j["displacement"] = json::array();
  for (const auto& e : report.displacement) j["displacement"].push_back({{"horizon", e.horizon}, {"ade", e.ade}, {"fde", e.fde}});
  write_json(run.dir() / "prediction.json", j);
  write_text(run.dir() / "prediction.txt", format_table(report));
  run.finish(resolved);
  std::cout << format_table(report);
  return 0;
}

int cmd_eval_occupancy(const std::string& data, const std::string& split, const std::string& predictor, int stride,
                       const std::string& out) {
  json resolved;
  const auto report = evaluate(data, split, predictor, stride, resolved);
  Run run(out, "eval-occupancy");
  json rows = json::array();
  for (std::size_t k = 0; k < report.crosswalk.size(); ++k)
    rows.push_back({{"horizon", k + 1}, {"crosswalk", to_json(report.crosswalk[k])}, {"entry", to_json(report.entry[k])}});
  write_json(run.dir() / "occupancy.json", {{"predictor", report.predictor}, {"samples", report.samples}, {"horizons", rows}});

  std::ostringstream t;
  char line[128];
  std::snprintf(line, sizeof line, "%-4s %9s %9s %9s %9s\n", "h", "cw prec", "cw rec", "en prec", "en rec");
  t << "predictor: " << report.predictor << "  samples: " << report.samples << '\n' << line;
  for (std::size_t k = 0; k < report.crosswalk.size(); ++k) {
    std::snprintf(line, sizeof line, "%-4zu %9.3f %9.3f %9.3f %9.3f\n", k + 1, report.crosswalk[k].precision,
                  report.crosswalk[k].recall, report.entry[k].precision, report.entry[k].recall);
    t << line;
  }
  write_text(run.dir() / "occupancy.txt", t.str());
  run.finish(resolved);
  std::cout << t.str();
  return 0;
}

// ---- suite and simulation -------------------------------------------------------

int cmd_make_suite(std::optional<int> count, std::optional<double> fraction, const json& config,
                   std::optional<std::uint64_t> seed, const std::string& out) {
  SuiteOptions opt = suite_options_from_json(section(config, "suite"));
  if (count) opt.count = *count;
  if (fraction) opt.optimizable_fraction = *fraction;
  if (seed) opt.seed = *seed;
  opt = suite_options_from_json(to_json(opt));
  const SimConfig sim = sim_config_from_json(section(config, "sim"));
  const auto suite = make_suite(default_geometry(), opt, sim);
  Run run(out, "make-suite");
  write_suite(run.dir(), suite);
  run.finish({{"suite", to_json(opt)}, {"sim", to_json(sim)}});
  return 0;
}

PredictorSetting parse_setting(const std::string& s) {
  if (s == "none") return {PredictorMode::None, nullptr};
  if (s == "ground-truth") return {PredictorMode::GroundTruth, nullptr};
  if (s.rfind("model:", 0) == 0) return {PredictorMode::Model, load_model(s.substr(6))};
  throw Error(ErrorCode::InvalidSpec, "unknown predictor '" + s + "'");
}

int cmd_simulate(const std::string& manifest, const std::vector<std::string>& scenarios, const std::string& predictor,
                 int jobs, const json& config, const std::string& out) {
  if (manifest.empty() == scenarios.empty()) throw Error(ErrorCode::InvalidSpec, "give either --manifest or --scenario");
  std::vector<fs::path> paths;
  if (!manifest.empty()) {
    if (!fs::exists(manifest)) throw Error(ErrorCode::IoError, "manifest not found: " + manifest);
    paths = load_manifest(manifest);
  } else {
    paths.assign(scenarios.begin(), scenarios.end());
  }
  const SimConfig sim = sim_config_from_json(section(config, "sim"));
  const MetricsConfig metrics = metrics_config_from_json(section(config, "metrics"));
  const PredictorSetting setting = parse_setting(predictor);

  std::vector<ScenarioSpec> specs;
  for (const auto& p : paths) specs.push_back(load_scenario(p));
  log(Level::Info, "simulating " + std::to_string(specs.size()) + " scenarios, mode " + setting.label());
  const auto results = run_batch(specs, setting, sim, std::max(1, jobs));

  Run run(out, "simulate");
  std::ofstream logs(run.dir() / "triplogs.jsonl", std::ios::binary);
  if (!logs) throw Error(ErrorCode::IoError, "cannot write " + (run.dir() / "triplogs.jsonl").string());
  json summary = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    json row = {{"id", r.id}, {"ok", r.ok()}};
    if (r.ok()) {
      write_trip_log(logs, *r.baseline);
      write_trip_log(logs, *r.advised);
      row["optimizable"] = r.baseline->optimizable;
      row["baseline"] = to_json(trip_metrics(*r.baseline, metrics));
      row["advised"] = to_json(trip_metrics(*r.advised, metrics));
      row["safety"] = to_json(check_safety(*r.advised, specs[i], sim));
    } else {
      row["error"] = {{"code", r.error_code}, {"message", r.error}};
      log(Level::Warn, r.id + ": " + r.error_code + " " + r.error);
    }
    summary.push_back(row);
  }
  logs.close();
  write_json(run.dir() / "summary.json", summary);
  const auto report = aggregate_results(results, metrics);
  write_json(run.dir() / "report.json", to_json(report));
  write_text(run.dir() / "report.txt", format_table(report));
  json scenario_list = json::array();
  for (const auto& p : paths) scenario_list.push_back(p.string());
  run.finish({{"manifest", manifest},
              {"scenarios", scenario_list},
              {"predictor", predictor},
              {"sim", to_json(sim)},
              {"metrics", to_json(metrics)}});
  std::cout << format_table(report);
  return 0;
}

int cmd_report(const std::vector<std::string>& files, const json& config, const std::string& out) {
  const MetricsConfig metrics = metrics_config_from_json(section(config, "metrics"));
  std::vector<TripLog> logs;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + f);
    auto part = read_trip_logs(in);
    logs.insert(logs.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  const auto report = aggregate_logs(logs, metrics);
  Run run(out, "report");
  write_json(run.dir() / "report.json", to_json(report));
  write_text(run.dir() / "report.txt", format_table(report));
  run.finish({{"logs", files}, {"metrics", to_json(metrics)}});
  std::cout << format_table(report);
  return 0;
}

int fail(std::string_view code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Roundabout speed advisory lab"};
  app.require_subcommand(1);

  std::string config_path, out;
  std::optional<std::uint64_t> seed;
  std::string variant;

  auto common = [&](CLI::App* sub, bool with_seed) {
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output folder")->required();
    if (with_seed) sub->add_option("--seed", seed, "random seed");
  };

  PreprocessArgs pre;
  auto* preprocess = app.add_subcommand("preprocess", "CSV or synthetic traffic to 1 Hz series and a split");
  preprocess->add_option("--input", pre.inputs, "trajectory CSV files");
  preprocess->add_option("--geometry", pre.geometry, "roundabout geometry file");
  preprocess->add_option("--synthetic", pre.synthetic, "synthetic traffic spec (JSON)");
  preprocess->add_option("--hz", pre.hz, "source sampling rate")->capture_default_str();
  preprocess->add_option("--segment", pre.segment, "segment length in seconds")->capture_default_str();
  common(preprocess, true);

  std::string data;
  std::optional<int> epochs;
  auto* train_cmd = app.add_subcommand("train", "train the trajectory predictor");
  train_cmd->add_option("--data", data, "preprocessed dataset folder")->required();
  train_cmd->add_option("--variant", variant, "position | dynamics | dynamics-exit")
      ->check(CLI::IsMember({"position", "dynamics", "dynamics-exit"}));
  train_cmd->add_option("--epochs", epochs, "training epochs");
  common(train_cmd, true);

  std::string split = "test", predictor;
  int stride = 1;
  auto eval_opts = [&](CLI::App* sub) {
    sub->add_option("--data", data, "preprocessed dataset folder")->required();
    sub->add_option("--split", split, "train | val | test")->check(CLI::IsMember({"train", "val", "test"}))->capture_default_str();
    sub->add_option("--predictor", predictor, "ground-truth | constant-velocity | model:<path>")->required();
    sub->add_option("--stride", stride, "seconds between evaluated times")->check(CLI::PositiveNumber)->capture_default_str();
    common(sub, false);
  };
  auto* eval_pred = app.add_subcommand("eval-prediction", "ADE/FDE per horizon");
  eval_opts(eval_pred);
  auto* eval_occ = app.add_subcommand("eval-occupancy", "zone occupancy precision/recall per horizon");
  eval_opts(eval_occ);

  std::optional<int> count;
  std::optional<double> fraction;
  auto* suite_cmd = app.add_subcommand("make-suite", "generate the evaluation scenario suite");
  suite_cmd->add_option("--count", count, "number of scenarios");
  suite_cmd->add_option("--fraction", fraction, "share of scenarios with a designed conflict");
  common(suite_cmd, true);

  std::string manifest;
  std::vector<std::string> scenario_files;
  std::string sim_predictor = "none";
  int jobs = 1;
  auto* simulate = app.add_subcommand("simulate", "baseline and advised runs per scenario");
  simulate->add_option("--manifest", manifest, "scenario manifest");
  simulate->add_option("--scenario", scenario_files, "scenario files");
  simulate->add_option("--predictor", sim_predictor, "none | ground-truth | model:<path>")->capture_default_str();
  simulate->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  common(simulate, false);

  std::vector<std::string> log_files;
  auto* report = app.add_subcommand("report", "aggregate trip logs");
  report->add_option("--logs", log_files, "trip log files (JSON lines)")->required();
  common(report, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("Usage", e.what());
  }

  try {
    const json config = load_config(config_path);
    const std::uint64_t run_seed = seed ? *seed : config.value("seed", std::uint64_t{42});
    if (variant.empty()) variant = config.value("variant", std::string());
    if (*preprocess) return cmd_preprocess(pre, config, run_seed, out);
    if (*train_cmd) return cmd_train(data, variant, epochs, config, run_seed, out);
    if (*eval_pred) return cmd_eval_prediction(data, split, predictor, stride, out);
    if (*eval_occ) return cmd_eval_occupancy(data, split, predictor, stride, out);
    if (*suite_cmd) {
      std::optional<std::uint64_t> s = seed;
      if (!s && config.contains("seed")) s = config.at("seed").get<std::uint64_t>();
      return cmd_make_suite(count, fraction, config, s, out);
    }
    if (*simulate) return cmd_simulate(manifest, scenario_files, sim_predictor, jobs, config, out);
    if (*report) return cmd_report(log_files, config, out);
  } catch (const Error& e) {
    return fail(to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail("BadFormat", e.what());
  } catch (const fs::filesystem_error& e) {
    return fail("IoError", e.what());
  } catch (const std::exception& e) {
    return fail("Internal", e.what());
  }
  return 1;
}
