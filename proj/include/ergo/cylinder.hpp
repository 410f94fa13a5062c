#ifndef ERGO_CYLINDER_HPP
#define ERGO_CYLINDER_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "ergo/grid.hpp"
#include "ergo/rational.hpp"

namespace ergo {

/// Finite coordinate-constraint set on {0,1}^Z under the fair-coin product
/// measure. The shift convention is (T x)_i = x_{i-1}, so T^i D_b constrains
/// coordinate i to b and the atom B_{(b_{-k},...,b_k)} pins x_{-k}..x_k.
class Cylinder {
 public:
  Cylinder() = default;

  static Cylinder empty_set() {
    Cylinder c;
    c.empty_ = true;
    return c;
  }

  /// {x : x_coord = symbol}; single(0, b) is D_b.
  static Cylinder single(std::int64_t coord, int symbol) {
    if (symbol != 0 && symbol != 1) throw std::invalid_argument("symbol must be 0 or 1");
    Cylinder c;
    c.cons_[coord] = symbol;
    return c;
  }

  bool is_empty() const { return empty_; }
  const std::map<std::int64_t, int>& constraints() const { return cons_; }

  Cylinder shifted(std::int64_t m) const {
    if (empty_) return *this;
    Cylinder out;
    for (auto [i, b] : cons_) out.cons_[i + m] = b;
    return out;
  }

  /// Intersection; a coordinate receiving two different symbols yields the
  /// empty cylinder.
  Cylinder merge(const Cylinder& other) const {
    if (empty_ || other.empty_) return empty_set();
    Cylinder out = *this;
    for (auto [i, b] : other.cons_) {
      auto it = out.cons_.find(i);
      if (it != out.cons_.end() && it->second != b) return empty_set();
      out.cons_[i] = b;
    }
    return out;
  }

  Rational measure() const {
    if (empty_) return Rational(0);
    return inv_pow2(static_cast<unsigned>(cons_.size()));
  }

  bool operator==(const Cylinder&) const = default;

 private:
  std::map<std::int64_t, int> cons_;
  bool empty_ = false;
};

/// Exact mu(C1 intersect C2).
inline Rational merge_measure(const Cylinder& c1, const Cylinder& c2) {
  return c1.merge(c2).measure();
}

inline unsigned atom_count(unsigned k) { return 1u << (2 * k + 1); }

/// Atom index convention: index bits read MSB-first give (b_{-k}, ..., b_k),
/// i.e. lexicographic order in the pattern.
inline int atom_bit(std::uint32_t index, unsigned k, std::int64_t coord) {
  // coord in [-k, k]; coordinate -k sits at the MSB of the (2k+1)-bit index.
  const unsigned pos = static_cast<unsigned>(static_cast<std::int64_t>(k) - coord);
  return static_cast<int>((index >> pos) & 1u);
}

inline Cylinder atom_cylinder(std::uint32_t index, unsigned k) {
  Cylinder c;
  for (std::int64_t i = -static_cast<std::int64_t>(k); i <= static_cast<std::int64_t>(k); ++i)
    c = c.merge(Cylinder::single(i, atom_bit(index, k, i)));
  return c;
}

/// All 2^{2k+1} atoms of the rank-k symbolic partition, lexicographic order.
inline std::vector<Cylinder> atoms(unsigned k) {
  std::vector<Cylinder> out;
  out.reserve(atom_count(k));
  for (std::uint32_t t = 0; t < atom_count(k); ++t) out.push_back(atom_cylinder(t, k));
  return out;
}

/// Center-out position of a rank-k atom: patterns sorted by the digit string
/// (b_0, b_{-1}, b_1, b_{-2}, b_2, ...). With this cell ordering every rank-j
/// atom, j <= k, occupies a consecutive block of cells, so one grid layout
/// realizes all ranks at once.
inline std::uint32_t atom_block_key(std::uint32_t index, unsigned k) {
  std::uint32_t key = 0;
  key = atom_bit(index, k, 0);
  for (unsigned j = 1; j <= k; ++j) {
    key = (key << 1) | static_cast<std::uint32_t>(atom_bit(index, k, -static_cast<std::int64_t>(j)));
    key = (key << 1) | static_cast<std::uint32_t>(atom_bit(index, k, static_cast<std::int64_t>(j)));
  }
  return key;
}

/// A set in the rank-`rank` atom algebra: a sorted union of atom indices.
struct AtomUnion {
  unsigned rank = 0;
  std::vector<std::uint32_t> members;  // strictly increasing atom indices

  AtomUnion() = default;
  AtomUnion(unsigned r, std::vector<std::uint32_t> m) : rank(r), members(std::move(m)) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i] >= atom_count(rank))
        throw std::invalid_argument("atom index out of range");
      if (i > 0 && members[i - 1] >= members[i])
        throw std::invalid_argument("atom indices must be strictly increasing");
    }
  }

  static AtomUnion single_atom(unsigned rank, std::uint32_t index) {
    return AtomUnion(rank, {index});
  }

  Rational measure() const {
    return Rational(BigInt(members.size()), pow2(2 * rank + 1));
  }

  bool contains(std::uint32_t idx) const {
    return std::binary_search(members.begin(), members.end(), idx);
  }

  /// Rewrites the union in the finer rank-K algebra, K >= rank.
  AtomUnion lifted(unsigned K) const {
    if (K < rank) throw std::invalid_argument("cannot lift to a coarser rank");
    if (K == rank) return *this;
    const unsigned outer = 2 * (K - rank);
    const unsigned low = K - rank;  // coords rank+1..K sit in the low bits
    std::vector<std::uint32_t> out;
    out.reserve(members.size() << outer);
    for (std::uint32_t t : members) {
      for (std::uint32_t o = 0; o < (1u << outer); ++o) {
        const std::uint32_t hi = o >> low, lo = o & ((1u << low) - 1);
        out.push_back((hi << (K + rank + 1)) | (t << low) | lo);
      }
    }
    std::sort(out.begin(), out.end());
    return AtomUnion(K, std::move(out));
  }

  bool operator==(const AtomUnion&) const = default;
};

/// Exact mu(T^m A intersect B) on the symbolic side, atoms pairwise disjoint.
inline Rational symbolic_shift_intersection(const AtomUnion& a, const AtomUnion& b,
                                            std::int64_t m) {
  Rational total(0);
  for (std::uint32_t u : a.members) {
    Cylinder cu = atom_cylinder(u, a.rank).shifted(m);
    for (std::uint32_t v : b.members)
      total += merge_measure(cu, atom_cylinder(v, b.rank));
  }
  return total;
}

inline Rational symbolic_sym_diff(const AtomUnion& a, const AtomUnion& b) {
  const unsigned K = std::max(a.rank, b.rank);
  AtomUnion la = a.lifted(K), lb = b.lifted(K);
  std::vector<std::uint32_t> out;
  std::set_symmetric_difference(la.members.begin(), la.members.end(),
                                lb.members.begin(), lb.members.end(),
                                std::back_inserter(out));
  return Rational(BigInt(out.size()), pow2(2 * K + 1));
}

/// Majority-rule projection of a rank-K union onto the rank-k algebra:
/// keep atom a iff mu(A intersect a) > mu(a)/2 (strict; exact half-ties are
/// dropped). This minimizes mu(A sym-diff Ã) over rank-k-measurable sets.
struct Approximation {
  AtomUnion set;
  Rational error;
};

inline Approximation best_atom_approximation(const AtomUnion& a, unsigned k) {
  if (k > a.rank) throw std::invalid_argument("target rank exceeds the set's rank");
  const unsigned K = a.rank;
  const std::uint32_t per = 1u << (2 * (K - k));  // rank-K atoms per rank-k atom
  const unsigned low = K - k;
  std::vector<std::uint32_t> counts(atom_count(k), 0);
  for (std::uint32_t j : a.members) {
    const std::uint32_t mid = (j >> low) & (atom_count(k) - 1);
    ++counts[mid];
  }
  std::vector<std::uint32_t> keep;
  BigInt err_cells = 0;
  for (std::uint32_t t = 0; t < atom_count(k); ++t) {
    if (2ull * counts[t] > per) {
      keep.push_back(t);
      err_cells += per - counts[t];
    } else {
      err_cells += counts[t];
    }
  }
  return {AtomUnion(k, std::move(keep)), Rational(err_cells, pow2(2 * K + 1))};
}

/// Grid realization: on a grid of N = 2^L cells, L >= 2*rank+1, the rank-k
/// atom with block key `key` is the cell block [key*N/2^{2k+1}, (key+1)*...).
inline CellSet realize_on_grid(const AtomUnion& a, std::uint32_t n) {
  const std::uint32_t na = atom_count(a.rank);
  if (n % na != 0)
    throw std::invalid_argument("grid resolution cannot realize atoms at this rank");
  const std::uint32_t block = n / na;
  std::vector<std::uint32_t> keys;
  keys.reserve(a.members.size());
  for (std::uint32_t t : a.members) keys.push_back(atom_block_key(t, a.rank));
  std::sort(keys.begin(), keys.end());
  std::vector<std::uint32_t> cells;
  cells.reserve(keys.size() * block);
  for (std::uint32_t key : keys)
    for (std::uint32_t c = key * block; c < (key + 1) * block; ++c) cells.push_back(c);
  return CellSet(n, std::move(cells));
}

}  // namespace ergo

#endif  // ERGO_CYLINDER_HPP
