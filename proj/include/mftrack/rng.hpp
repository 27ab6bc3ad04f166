#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace mft {

/// Uniform integer in [0, n) via rejection sampling. std::uniform_int_distribution
/// is implementation-defined, so seeded runs would not be portable with it.
inline uint64_t uniform_below(std::mt19937_64& engine, uint64_t n) {
  const uint64_t max = std::numeric_limits<uint64_t>::max();
  const uint64_t limit = max - max % n;  // largest multiple of n below 2^64
  uint64_t x = engine();
  while (x >= limit) x = engine();
  return x % n;
}

/// k distinct indices drawn uniformly from [0, n), in ascending order.
inline std::vector<int> sample_without_replacement(std::mt19937_64& engine, int n, int k) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(uniform_below(engine, static_cast<uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace mft
