#include "rosa/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rosa/error.hpp"

namespace rosa {

DatasetSplit split_dataset(const std::vector<FrameSeries>& segments, SplitFractions fractions,
                           std::uint64_t seed) {
  std::vector<bool> flags;
  flags.reserve(segments.size());
  for (const auto& s : segments) flags.push_back(s.has_vru());
  return split_by_flags(flags, fractions, seed);
}

DatasetSplit split_by_flags(const std::vector<bool>& has_vru, SplitFractions fractions,
                            std::uint64_t seed) {
  const std::size_t n = has_vru.size();
  if (n < 10)
    throw Error(ErrorCode::TooFewSegments,
                "need at least 10 segments to split, got " + std::to_string(n));
  if (fractions.train < 0 || fractions.val < 0 || fractions.test < 0 ||
      std::abs(fractions.train + fractions.val + fractions.test - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidSpec, "split fractions must be non-negative and sum to 1");

  std::vector<std::size_t> vru, plain;
  for (std::size_t i = 0; i < n; ++i) (has_vru[i] ? vru : plain).push_back(i);
  std::mt19937_64 rng(seed);
  std::shuffle(vru.begin(), vru.end(), rng);
  std::shuffle(plain.begin(), plain.end(), rng);

  auto share = [](std::size_t count, double frac) {
    return static_cast<std::size_t>(std::llround(frac * static_cast<double>(count)));
  };
  const std::size_t val_total = share(n, fractions.val);
  const std::size_t test_total = share(n, fractions.test);

  std::size_t val_v = share(vru.size(), fractions.val);
  std::size_t test_v = share(vru.size(), fractions.test);
  if (vru.size() >= 3) {
    val_v = std::max<std::size_t>(val_v, 1);
    test_v = std::max<std::size_t>(test_v, 1);
  }
  val_v = std::min(val_v, val_total);
  test_v = std::min(test_v, test_total);
  const std::size_t val_p = std::min(val_total - val_v, plain.size());
  const std::size_t test_p = std::min(test_total - test_v, plain.size() - val_p);

  DatasetSplit split;
  split.fractions = fractions;
  split.seed = seed;
  auto take = [](const std::vector<std::size_t>& from, std::size_t begin, std::size_t count,
                 std::vector<std::size_t>& to) {
    to.insert(to.end(), from.begin() + static_cast<std::ptrdiff_t>(begin),
              from.begin() + static_cast<std::ptrdiff_t>(begin + count));
  };
  take(vru, 0, val_v, split.val);
  take(vru, val_v, test_v, split.test);
  take(vru, val_v + test_v, vru.size() - val_v - test_v, split.train);
  take(plain, 0, val_p, split.val);
  take(plain, val_p, test_p, split.test);
  take(plain, val_p + test_p, plain.size() - val_p - test_p, split.train);
  for (auto* v : {&split.train, &split.val, &split.test}) std::sort(v->begin(), v->end());
  return split;
}

}  // namespace rosa
