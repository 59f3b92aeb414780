#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rosa/data/agent.hpp"

namespace rosa {

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

/// Indices into the segment list handed to split_dataset.
struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  SplitFractions fractions;
  std::uint64_t seed = 0;
};

/// Seeded split, stratified on whether a segment contains any VRU. Throws
/// TooFewSegments below 10 segments and InvalidSpec for bad fractions.
DatasetSplit split_dataset(const std::vector<FrameSeries>& segments, SplitFractions fractions,
                           std::uint64_t seed);

/// Same, from precomputed VRU flags.
DatasetSplit split_by_flags(const std::vector<bool>& has_vru, SplitFractions fractions,
                            std::uint64_t seed);

}  // namespace rosa
