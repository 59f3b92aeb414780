#include "rosa/predictor/mask.hpp"

namespace rosa {

AttentionMask build_attention_mask(int agents, int steps, const std::vector<bool>& valid) {
  const int n = agents * steps;
  std::vector<std::uint8_t> allowed(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  auto is_valid = [&](int a) { return valid.empty() || valid[static_cast<std::size_t>(a)]; };
  for (int i = 0; i < agents; ++i) {
    if (!is_valid(i)) continue;
    for (int t = 0; t < steps; ++t) {
      const int q = i * steps + t;
      for (int j = 0; j < agents; ++j) {
        if (!is_valid(j)) continue;
        for (int u = 0; u < steps; ++u)
          if (i == j || t == u)
            allowed[static_cast<std::size_t>(q) * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(j * steps + u)] = 1;
      }
    }
  }
  return AttentionMask(agents, steps, std::move(allowed));
}

}  // namespace rosa
