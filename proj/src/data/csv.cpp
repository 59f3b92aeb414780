#include "rosa/data/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "rosa/error.hpp"

namespace rosa {

ColumnMap ColumnMap::canonical() {
  ColumnMap m;
  m.agent_id = "agent_id";
  m.time = "frame";
  m.cls = "class";
  m.x = "x";
  m.y = "y";
  m.speed = "v";
  m.a_tan = "a_tan";
  m.a_lat = "a_lat";
  m.heading = "theta";
  m.time_in_seconds = false;
  return m;
}

std::size_t RawTrajectorySet::record_count() const {
  std::size_t n = 0;
  for (const auto& [id, recs] : agents) n += recs.size();
  return n;
}

AgentClass parse_agent_class(const std::string& label) {
  std::string lower(label);
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  for (const char* vru : {"pedestrian", "bicycle", "cyclist", "bike", "person", "vru"})
    if (lower.find(vru) != std::string::npos) return AgentClass::VRU;
  return AgentClass::Vehicle;
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r\"");
    auto e = cell.find_last_not_of(" \t\r\"");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

RawTrajectorySet parse_trajectory_file(std::istream& in, const ColumnMap& columns, double hz_in) {
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  if (line.find_first_not_of(" \t\r") == std::string::npos)
    throw Error(ErrorCode::EmptyInput, "trajectory file is empty");
  const auto header = split_row(line);
  auto col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, "missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_id = col(columns.agent_id), c_t = col(columns.time), c_cls = col(columns.cls),
                    c_x = col(columns.x), c_y = col(columns.y), c_v = col(columns.speed),
                    c_at = col(columns.a_tan), c_al = col(columns.a_lat),
                    c_th = col(columns.heading);
  const std::size_t needed = std::max({c_id, c_t, c_cls, c_x, c_y, c_v, c_at, c_al, c_th}) + 1;

  RawTrajectorySet set;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++row;
    const auto cells = split_row(line);
    auto malformed = [&](const std::string& what) {
      return Error(ErrorCode::MalformedRow, "row " + std::to_string(row) + ": " + what);
    };
    if (cells.size() < needed) throw malformed("expected at least " + std::to_string(needed) + " fields");
    auto num = [&](std::size_t c) {
      double v;
      if (!parse_double(cells[c], v)) throw malformed("non-numeric value '" + cells[c] + "' in column '" + header[c] + "'");
      return v;
    };
    RawRecord r;
    const double id = num(c_id);
    r.id = static_cast<AgentId>(std::llround(id));
    const double t = num(c_t);
    r.frame = columns.time_in_seconds ? std::llround(t * hz_in) : std::llround(t);
    r.cls = parse_agent_class(cells[c_cls]);
    r.x = num(c_x);
    r.y = num(c_y);
    r.v = num(c_v);
    r.a_tan = num(c_at);
    r.a_lat = num(c_al);
    r.theta = num(c_th);
    if (columns.heading_in_degrees) r.theta *= std::numbers::pi / 180.0;
    r.theta = wrap_angle(r.theta);
    set.agents[r.id].push_back(r);
  }
  if (row == 0) throw Error(ErrorCode::EmptyInput, "trajectory file has a header but no rows");
  for (auto& [id, recs] : set.agents)
    std::stable_sort(recs.begin(), recs.end(),
                     [](const RawRecord& a, const RawRecord& b) { return a.frame < b.frame; });
  return set;
}

void write_trajectory_csv(std::ostream& out, const FrameSeries& series) {
  const auto m = ColumnMap::canonical();
  out << m.agent_id << "," << m.time << "," << m.cls << "," << m.x << "," << m.y << "," << m.speed
      << "," << m.a_tan << "," << m.a_lat << "," << m.heading << "\n";
  out << std::setprecision(17);
  for (const auto& f : series.frames)
    for (const auto& a : f.agents)
      out << a.id << "," << f.t << "," << (a.cls == AgentClass::VRU ? "Pedestrian" : "Car") << ","
          << a.pos.x << "," << a.pos.y << "," << a.v << "," << a.a_tan << "," << a.a_lat << ","
          << a.theta << "\n";
}

}  // namespace rosa
