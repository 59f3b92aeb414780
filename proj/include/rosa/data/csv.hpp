#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rosa/data/agent.hpp"

namespace rosa {

/// Header names of the required columns. The defaults follow the openDD
/// trajectory export.
struct ColumnMap {
  std::string agent_id = "OBJID";
  std::string time = "TIMESTAMP";
  std::string cls = "CLASS";
  std::string x = "UTM_X";
  std::string y = "UTM_Y";
  std::string speed = "V";
  std::string a_tan = "ACC_TAN";
  std::string a_lat = "ACC_LAT";
  std::string heading = "UTM_ANGLE";
  bool time_in_seconds = true;  // otherwise the column holds frame indices
  bool heading_in_degrees = false;

  /// Columns written by write_trajectory_csv.
  static ColumnMap canonical();
};

struct RawRecord {
  AgentId id = 0;
  AgentClass cls = AgentClass::Vehicle;
  std::int64_t frame = 0;  // sample index at the source rate
  double x = 0.0, y = 0.0, v = 0.0, a_tan = 0.0, a_lat = 0.0, theta = 0.0;
};

/// High-rate per-agent records, grouped by agent and sorted by frame.
struct RawTrajectorySet {
  std::map<AgentId, std::vector<RawRecord>> agents;

  std::size_t record_count() const;
};

AgentClass parse_agent_class(const std::string& label);

/// Throws MissingColumn, MalformedRow (1-based data row index in the
/// message), or EmptyInput.
RawTrajectorySet parse_trajectory_file(std::istream& in, const ColumnMap& columns, double hz_in);

/// Writes one row per agent per frame using ColumnMap::canonical() headers
/// (frame index column).
void write_trajectory_csv(std::ostream& out, const FrameSeries& series);

}  // namespace rosa
