#include "rosa/data/agent.hpp"

#include <unordered_set>

#include "rosa/error.hpp"

namespace rosa {

const AgentState* Frame::find(AgentId id) const {
  for (const auto& a : agents)
    if (a.id == id) return &a;
  return nullptr;
}

const Frame* FrameSeries::at(std::int64_t t) const {
  if (frames.empty() || t < first_time() || t > last_time()) return nullptr;
  const auto& f = frames[static_cast<std::size_t>(t - first_time())];
  return f.t == t ? &f : nullptr;
}

bool FrameSeries::has_vru() const {
  for (const auto& f : frames)
    for (const auto& a : f.agents)
      if (a.cls == AgentClass::VRU) return true;
  return false;
}

void validate_series(const FrameSeries& series) {
  for (std::size_t i = 0; i < series.frames.size(); ++i) {
    const auto& f = series.frames[i];
    if (i > 0 && f.t <= series.frames[i - 1].t)
      throw Error(ErrorCode::InvalidSpec,
                  "frame timestamps not strictly increasing at t=" + std::to_string(f.t));
    std::unordered_set<AgentId> seen;
    for (const auto& a : f.agents)
      if (!seen.insert(a.id).second)
        throw Error(ErrorCode::InvalidSpec, "agent " + std::to_string(a.id) +
                                                " appears twice in frame t=" + std::to_string(f.t));
  }
}

}  // namespace rosa
