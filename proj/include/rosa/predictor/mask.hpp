#pragma once

#include <cstdint>
#include <vector>

namespace rosa {

/// Token (agent i, step t) sits at index i * steps + t.
class AttentionMask {
 public:
  AttentionMask() = default;
  AttentionMask(int agents, int steps, std::vector<std::uint8_t> allowed)
      : agents_(agents), steps_(steps), allowed_(std::move(allowed)) {}

  int agents() const { return agents_; }
  int steps() const { return steps_; }
  int tokens() const { return agents_ * steps_; }
  bool allowed(int query, int key) const {
    return allowed_[static_cast<std::size_t>(query) * static_cast<std::size_t>(tokens()) +
                    static_cast<std::size_t>(key)] != 0;
  }

 private:
  int agents_ = 0;
  int steps_ = 0;
  std::vector<std::uint8_t> allowed_;
};

/// (i, t) may attend to (j, t') iff i == j or t == t', and both agents are
/// valid. Rows of invalid (padding) agents allow nothing.
AttentionMask build_attention_mask(int agents, int steps, const std::vector<bool>& valid = {});

}  // namespace rosa
