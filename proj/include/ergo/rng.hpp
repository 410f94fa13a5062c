#ifndef ERGO_RNG_HPP
#define ERGO_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace ergo {

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream: output i is mix64(key + i*gamma).
/// All randomness in the project flows through this generator so runs are
/// reproducible bit-exactly from (seed, stream label).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Derives an independent stream, e.g. one per search trial.
  static CounterRng derive(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng(mix64(seed ^ mix64(stream + 0x53A1F3C2D4B5E697ULL)));
  }

  std::uint64_t next() { return mix64(key_ + (++ctr_) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform in [0, bound). bound > 0. Uses rejection so the result is
  /// exactly uniform and stable across platforms.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * ((~0ULL) / bound);
    for (;;) {
      std::uint64_t v = next();
      if (v < limit) return v % bound;
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

/// Fisher-Yates shuffle driven by CounterRng.
inline void shuffle_cells(std::vector<std::uint32_t>& v, CounterRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.next_below(i)]);
}

/// Uniformly random m-subset of {0, ..., n-1}, sorted.
inline std::vector<std::uint32_t> random_subset(std::uint32_t n, std::uint32_t m,
                                                CounterRng& rng) {
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  shuffle_cells(all, rng);
  all.resize(m);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace ergo

#endif  // ERGO_RNG_HPP
