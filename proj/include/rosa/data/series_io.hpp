#pragma once

#include <filesystem>
#include <iosfwd>

#include "json.hpp"
#include "rosa/data/agent.hpp"
#include "rosa/data/split.hpp"

namespace rosa {

/// JSON lines: a header object {"format","version","frequency_hz",
/// "geometry_id"} followed by one {"t", "agents": [...]} object per frame.
void write_series(std::ostream& out, const FrameSeries& series);
FrameSeries read_series(std::istream& in);
void save_series(const std::filesystem::path& path, const FrameSeries& series);
FrameSeries load_series(const std::filesystem::path& path);

nlohmann::json to_json(const AgentState& a);
AgentState agent_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DatasetSplit& split);
DatasetSplit split_from_json(const nlohmann::json& j);

}  // namespace rosa
