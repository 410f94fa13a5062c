#ifndef ERGO_GRID_HPP
#define ERGO_GRID_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ergo/rational.hpp"
#include "ergo/rng.hpp"

namespace ergo {

/// Finite stand-in for a standard probability space: N equal cells of
/// measure 1/N each, N a power of two.
struct GridSpace {
  std::uint32_t n = 0;

  explicit GridSpace(std::uint32_t resolution) : n(resolution) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw std::invalid_argument("grid resolution must be a power of two >= 2");
  }

  Rational cell_measure() const { return Rational(1, n); }
  bool operator==(const GridSpace&) const = default;
};

inline void require_same_space(std::uint32_t a, std::uint32_t b) {
  if (a != b) throw std::invalid_argument("incompatible grid spaces");
}

/// Measurable set: strictly sorted cell indices on a grid of resolution n.
struct CellSet {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> cells;

  CellSet() = default;
  CellSet(std::uint32_t resolution, std::vector<std::uint32_t> idx)
      : n(resolution), cells(std::move(idx)) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i] >= n) throw std::invalid_argument("cell index out of range");
      if (i > 0 && cells[i - 1] >= cells[i])
        throw std::invalid_argument("cell indices must be strictly increasing");
    }
  }

  static CellSet from_unsorted(std::uint32_t n, std::vector<std::uint32_t> idx) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return CellSet(n, std::move(idx));
  }

  static CellSet empty(std::uint32_t n) { return CellSet(n, {}); }
  static CellSet full(std::uint32_t n) {
    std::vector<std::uint32_t> v(n);
    for (std::uint32_t i = 0; i < n; ++i) v[i] = i;
    return CellSet(n, std::move(v));
  }

  std::size_t size() const { return cells.size(); }
  Rational measure() const { return Rational(BigInt(cells.size()), BigInt(n)); }
  bool contains(std::uint32_t c) const {
    return std::binary_search(cells.begin(), cells.end(), c);
  }
  bool operator==(const CellSet&) const = default;
};

inline CellSet unite(const CellSet& a, const CellSet& b) {
  require_same_space(a.n, b.n);
  std::vector<std::uint32_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.cells.begin(), a.cells.end(), b.cells.begin(), b.cells.end(),
                 std::back_inserter(out));
  return CellSet(a.n, std::move(out));
}

inline CellSet intersect(const CellSet& a, const CellSet& b) {
  require_same_space(a.n, b.n);
  std::vector<std::uint32_t> out;
  std::set_intersection(a.cells.begin(), a.cells.end(), b.cells.begin(),
                        b.cells.end(), std::back_inserter(out));
  return CellSet(a.n, std::move(out));
}

inline CellSet subtract(const CellSet& a, const CellSet& b) {
  require_same_space(a.n, b.n);
  std::vector<std::uint32_t> out;
  std::set_difference(a.cells.begin(), a.cells.end(), b.cells.begin(),
                      b.cells.end(), std::back_inserter(out));
  return CellSet(a.n, std::move(out));
}

inline CellSet sym_diff(const CellSet& a, const CellSet& b) {
  require_same_space(a.n, b.n);
  std::vector<std::uint32_t> out;
  std::set_symmetric_difference(a.cells.begin(), a.cells.end(), b.cells.begin(),
                                b.cells.end(), std::back_inserter(out));
  return CellSet(a.n, std::move(out));
}

inline CellSet complement_of(const CellSet& a) {
  std::vector<std::uint32_t> out;
  out.reserve(a.n - a.size());
  std::size_t j = 0;
  for (std::uint32_t c = 0; c < a.n; ++c) {
    if (j < a.cells.size() && a.cells[j] == c)
      ++j;
    else
      out.push_back(c);
  }
  return CellSet(a.n, std::move(out));
}

/// Invertible measure-preserving transformation at grid scale: a permutation
/// of the N cells with a cached cycle decomposition, so arbitrary integer
/// powers apply in O(|A|) after O(N) preprocessing.
class GridMap {
 public:
  explicit GridMap(std::vector<std::uint32_t> forward) : fwd_(std::move(forward)) {
    const std::uint32_t n = static_cast<std::uint32_t>(fwd_.size());
    if (n < 2 || (n & (n - 1)) != 0)
      throw std::invalid_argument("grid resolution must be a power of two >= 2");
    inv_.assign(n, n);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (fwd_[i] >= n || inv_[fwd_[i]] != n)
        throw std::invalid_argument("forward array is not a permutation");
      inv_[fwd_[i]] = i;
    }
    cycle_id_.assign(n, n);
    cycle_pos_.assign(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
      if (cycle_id_[i] != n) continue;
      const auto id = static_cast<std::uint32_t>(cycles_.size());
      cycles_.emplace_back();
      std::uint32_t c = i;
      do {
        cycle_id_[c] = id;
        cycle_pos_[c] = static_cast<std::uint32_t>(cycles_.back().size());
        cycles_.back().push_back(c);
        c = fwd_[c];
      } while (c != i);
    }
  }

  static GridMap identity(std::uint32_t n) {
    std::vector<std::uint32_t> f(n);
    for (std::uint32_t i = 0; i < n; ++i) f[i] = i;
    return GridMap(std::move(f));
  }

  static GridMap cyclic_shift(std::uint32_t n) {
    std::vector<std::uint32_t> f(n);
    for (std::uint32_t i = 0; i < n; ++i) f[i] = (i + 1) % n;
    return GridMap(std::move(f));
  }

  /// Bit reversal composed with increment; a cheap deterministic scrambler.
  static GridMap scrambler(std::uint32_t n) {
    unsigned bits = 0;
    while ((1u << bits) < n) ++bits;
    std::vector<std::uint32_t> f(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::uint32_t r = 0;
      for (unsigned b = 0; b < bits; ++b)
        if (i & (1u << b)) r |= 1u << (bits - 1 - b);
      f[i] = (r + 1) % n;
    }
    return GridMap(std::move(f));
  }

  static GridMap random(std::uint32_t n, CounterRng& rng) {
    std::vector<std::uint32_t> f(n);
    for (std::uint32_t i = 0; i < n; ++i) f[i] = i;
    shuffle_cells(f, rng);
    return GridMap(std::move(f));
  }

  /// Swaps the images of cells x and y.
  GridMap with_swapped_images(std::uint32_t x, std::uint32_t y) const {
    auto f = fwd_;
    std::swap(f[x], f[y]);
    return GridMap(std::move(f));
  }

  std::uint32_t resolution() const { return static_cast<std::uint32_t>(fwd_.size()); }
  std::uint32_t apply(std::uint32_t c) const { return fwd_[c]; }
  std::uint32_t apply_inverse(std::uint32_t c) const { return inv_[c]; }
  const std::vector<std::uint32_t>& forward() const { return fwd_; }

  std::uint32_t apply_power_cell(std::int64_t m, std::uint32_t c) const {
    const auto& cyc = cycles_[cycle_id_[c]];
    const auto len = static_cast<std::int64_t>(cyc.size());
    std::int64_t pos = (static_cast<std::int64_t>(cycle_pos_[c]) + m) % len;
    if (pos < 0) pos += len;
    return cyc[static_cast<std::size_t>(pos)];
  }

  CellSet apply_power(std::int64_t m, const CellSet& a) const {
    require_same_space(resolution(), a.n);
    std::vector<std::uint32_t> out;
    out.reserve(a.size());
    for (auto c : a.cells) out.push_back(apply_power_cell(m, c));
    return CellSet::from_unsorted(a.n, std::move(out));
  }

  CellSet image(const CellSet& a) const { return apply_power(1, a); }
  CellSet preimage(const CellSet& a) const { return apply_power(-1, a); }

  GridMap power(std::int64_t m) const {
    const std::uint32_t n = resolution();
    std::vector<std::uint32_t> f(n);
    for (std::uint32_t i = 0; i < n; ++i) f[i] = apply_power_cell(m, i);
    return GridMap(std::move(f));
  }

  GridMap inverse() const { return GridMap(inv_); }

  /// this after other: (a.compose(b))(x) = a(b(x)).
  GridMap compose(const GridMap& other) const {
    require_same_space(resolution(), other.resolution());
    std::vector<std::uint32_t> f(resolution());
    for (std::uint32_t i = 0; i < resolution(); ++i) f[i] = fwd_[other.fwd_[i]];
    return GridMap(std::move(f));
  }

  /// Multiset of cycle lengths, sorted.
  std::vector<std::size_t> cycle_type() const {
    std::vector<std::size_t> t;
    t.reserve(cycles_.size());
    for (const auto& c : cycles_) t.push_back(c.size());
    std::sort(t.begin(), t.end());
    return t;
  }

  bool operator==(const GridMap& o) const { return fwd_ == o.fwd_; }

 private:
  std::vector<std::uint32_t> fwd_, inv_;
  std::vector<std::uint32_t> cycle_id_, cycle_pos_;
  std::vector<std::vector<std::uint32_t>> cycles_;
};

/// Exact mu(P^m A  intersect  B).
inline Rational correlation(const GridMap& p, std::int64_t m, const CellSet& a,
                            const CellSet& b) {
  require_same_space(p.resolution(), a.n);
  require_same_space(a.n, b.n);
  std::size_t count = 0;
  for (auto c : a.cells)
    if (b.contains(p.apply_power_cell(m, c))) ++count;
  return Rational(BigInt(count), BigInt(a.n));
}

}  // namespace ergo

#endif  // ERGO_GRID_HPP
