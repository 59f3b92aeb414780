#include "rosa/data/series_io.hpp"

#include <fstream>
#include <string>

#include "rosa/error.hpp"

namespace rosa {

using nlohmann::json;

json to_json(const AgentState& a) {
  return json{{"id", a.id},       {"class", a.cls == AgentClass::VRU ? "vru" : "vehicle"},
              {"x", a.pos.x},     {"y", a.pos.y},
              {"v", a.v},         {"a_tan", a.a_tan},
              {"a_lat", a.a_lat}, {"theta", a.theta},
              {"exit", a.exit}};
}

AgentState agent_from_json(const json& j) {
  AgentState a;
  a.id = j.at("id").get<AgentId>();
  a.cls = j.at("class").get<std::string>() == "vru" ? AgentClass::VRU : AgentClass::Vehicle;
  a.pos = {j.at("x").get<double>(), j.at("y").get<double>()};
  a.v = j.at("v").get<double>();
  a.a_tan = j.at("a_tan").get<double>();
  a.a_lat = j.at("a_lat").get<double>();
  a.theta = j.at("theta").get<double>();
  a.exit = j.at("exit").get<int>();
  return a;
}

void write_series(std::ostream& out, const FrameSeries& series) {
  out << json{{"format", "rosa-frames"},
              {"version", 1},
              {"frequency_hz", series.frequency_hz},
              {"geometry_id", series.geometry_id}}
             .dump()
      << "\n";
  for (const auto& f : series.frames) {
    json agents = json::array();
    for (const auto& a : f.agents) agents.push_back(to_json(a));
    out << json{{"t", f.t}, {"agents", std::move(agents)}}.dump() << "\n";
  }
}

FrameSeries read_series(std::istream& in) {
  FrameSeries series;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "frame series file is empty");
  try {
    const json header = json::parse(line);
    if (header.value("format", "") != "rosa-frames")
      throw Error(ErrorCode::BadFormat, "not a rosa-frames file");
    series.frequency_hz = header.at("frequency_hz").get<double>();
    series.geometry_id = header.at("geometry_id").get<std::string>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      Frame f;
      f.t = j.at("t").get<std::int64_t>();
      for (const auto& a : j.at("agents")) f.agents.push_back(agent_from_json(a));
      series.frames.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("frame series: ") + e.what());
  }
  validate_series(series);
  return series;
}

void save_series(const std::filesystem::path& path, const FrameSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_series(out, series);
}

FrameSeries load_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_series(in);
}

json to_json(const DatasetSplit& split) {
  return json{{"train", split.train},
              {"val", split.val},
              {"test", split.test},
              {"fractions", {split.fractions.train, split.fractions.val, split.fractions.test}},
              {"seed", split.seed}};
}

DatasetSplit split_from_json(const json& j) {
  DatasetSplit s;
  s.train = j.at("train").get<std::vector<std::size_t>>();
  s.val = j.at("val").get<std::vector<std::size_t>>();
  s.test = j.at("test").get<std::vector<std::size_t>>();
  const auto f = j.at("fractions").get<std::vector<double>>();
  s.fractions = {f.at(0), f.at(1), f.at(2)};
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

}  // namespace rosa
