#ifndef ERGO_TOWERS_HPP
#define ERGO_TOWERS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ergo/grid.hpp"
#include "ergo/rational.hpp"

namespace ergo {

/// Rokhlin tower: X = E . PE . ... . P^{n-1}E . D with pairwise disjoint
/// levels and remainder D.
struct Tower {
  std::uint32_t n_space = 0;
  std::int64_t height = 0;
  CellSet base;
  std::vector<CellSet> levels;
  CellSet remainder;

  bool degenerate() const { return base.size() == 0; }
};

/// Greedy base search: scan cells ascending, take x into E when its first n
/// iterates are all unclaimed. A height above the shortest cycle may give an
/// empty base; that is a valid degenerate tower, not an error.
inline Tower build_tower(const GridMap& p, std::int64_t height) {
  if (height < 1) throw std::invalid_argument("tower height must be >= 1");
  const std::uint32_t n = p.resolution();
  std::vector<bool> claimed(n, false);
  std::vector<std::uint32_t> base;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (claimed[x]) continue;
    bool free = true;
    std::uint32_t c = x;
    for (std::int64_t i = 0; i < height && free; ++i) {
      if (claimed[c]) free = false;
      c = p.apply(c);
    }
    // Orbits shorter than the height revisit x and can never be free.
    if (!free) continue;
    c = x;
    bool revisit = false;
    for (std::int64_t i = 1; i < height; ++i) {
      c = p.apply(c);
      if (c == x) revisit = true;
    }
    if (revisit) continue;
    base.push_back(x);
    c = x;
    for (std::int64_t i = 0; i < height; ++i) {
      claimed[c] = true;
      c = p.apply(c);
    }
  }

  Tower t;
  t.n_space = n;
  t.height = height;
  t.base = CellSet(n, std::move(base));
  for (std::int64_t i = 0; i < height; ++i) t.levels.push_back(p.apply_power(i, t.base));
  std::vector<std::uint32_t> rem;
  for (std::uint32_t x = 0; x < n; ++x)
    if (!claimed[x]) rem.push_back(x);
  t.remainder = CellSet(n, std::move(rem));
  return t;
}

/// Optimal level-union approximation of A by majority rule, with the exact
/// achieved accuracy mu(A sym-diff B).
struct LevelApproximation {
  std::vector<bool> chosen;  // per level
  CellSet set;
  Rational accuracy{0};
};

inline LevelApproximation approximation_accuracy(const Tower& tower, const CellSet& a) {
  require_same_space(tower.n_space, a.n);
  LevelApproximation out;
  out.set = CellSet::empty(a.n);
  BigInt diff_cells = intersect(a, tower.remainder).size();
  for (const CellSet& level : tower.levels) {
    const std::size_t inter = intersect(a, level).size();
    const bool take = 2 * inter > level.size();
    out.chosen.push_back(take);
    if (take) {
      out.set = unite(out.set, level);
      diff_cells += BigInt(level.size() - inter);
    } else {
      diff_cells += BigInt(inter);
    }
  }
  out.accuracy = Rational(diff_cells, BigInt(a.n));
  return out;
}

/// Searches the height budget for a tower approximating every set with
/// accuracy < 1/k. A false verdict means "not found within budget".
struct RankOneResult {
  bool verdict = false;
  std::optional<Tower> best_tower;
  Rational best_accuracy{0};  // worst-case accuracy of the best tower
};

inline RankOneResult rank_one_membership(const GridMap& p, const std::vector<CellSet>& sets,
                                         unsigned k, const std::vector<std::int64_t>& heights) {
  if (heights.empty()) throw std::invalid_argument("height budget must be nonempty");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  RankOneResult out;
  const Rational target = Rational(1, k);
  for (std::int64_t h : heights) {
    Tower t = build_tower(p, h);
    Rational worst(0);
    for (const CellSet& a : sets) {
      Rational acc = approximation_accuracy(t, a).accuracy;
      if (acc > worst) worst = acc;
    }
    if (!out.best_tower || worst < out.best_accuracy) {
      out.best_accuracy = worst;
      out.best_tower = std::move(t);
    }
  }
  out.verdict = out.best_tower && out.best_accuracy < target;
  return out;
}

/// E~ = E \ (VE u V^2E u ... u V^{n-1}E); its V-images up to height n are
/// pairwise disjoint by construction (asserted).
inline CellSet shrink_base(const GridMap& v, const CellSet& e, std::int64_t height) {
  if (height < 2) throw std::invalid_argument("height must be >= 2");
  require_same_space(v.resolution(), e.n);
  CellSet shrunk = e;
  for (std::int64_t i = 1; i < height; ++i) shrunk = subtract(shrunk, v.apply_power(i, e));
  for (std::int64_t i = 1; i < height; ++i)
    if (intersect(shrunk, v.apply_power(i, shrunk)).size() != 0)
      throw std::logic_error("shrunken base images are not disjoint (implementation bug)");
  return shrunk;
}

/// Exact audit of the openness argument for R(j, k): measures the actual
/// perturbation size b_eff of V around S on the level collection, rebuilds
/// the tower over the shrunken base, and verifies the difference chain
///   mu(E sym-diff E~) <= (n-2) b_eff,
///   per-level difference <= (n-1) b_eff,
///   level-union difference <= n(n-1) b_eff,
///   final accuracy < 1/k.
struct OpennessCertificate {
  std::size_t j = 0;
  unsigned k = 0;
  std::int64_t height = 0;
  Rational accuracy_a{0};
  Rational b{0};        // (1/n^2)(1/k - a)
  Rational b_eff{0};    // measured worst level-pair deviation
  bool within_b = false;
  CellSet shrunk_base;
  Rational base_diff{0};
  Rational max_level_diff{0};
  Rational max_union_diff{0};
  Rational max_final_accuracy{0};
  bool chain_base = false, chain_levels = false, chain_unions = false, chain_final = false;
  bool pass = false;
};

inline OpennessCertificate openness_certificate(const GridMap& s, const Tower& tower,
                                                unsigned k, const std::vector<CellSet>& sets,
                                                const GridMap& v,
                                                std::int64_t power_window = 0) {
  require_same_space(s.resolution(), v.resolution());
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::int64_t n = tower.height;
  if (n < 2) throw std::invalid_argument("tower height must be >= 2");
  if (power_window == 0) power_window = n - 1;  // the proof uses powers up to n-1

  OpennessCertificate cert;
  cert.j = sets.size();
  cert.k = k;
  cert.height = n;

  std::vector<LevelApproximation> approx;
  for (const CellSet& a : sets) {
    approx.push_back(approximation_accuracy(tower, a));
    if (approx.back().accuracy > cert.accuracy_a) cert.accuracy_a = approx.back().accuracy;
  }
  const Rational inv_k(1, k);
  if (cert.accuracy_a >= inv_k)
    throw std::invalid_argument("tower does not approximate the sets with accuracy < 1/k");
  cert.b = Rational(1, BigInt(n) * BigInt(n)) * (inv_k - cert.accuracy_a);

  // b_eff: worst deviation over the level collection {E, SE, ..., S^{n-1}E}.
  for (std::int64_t m = -power_window; m <= power_window; ++m)
    for (const CellSet& li : tower.levels)
      for (const CellSet& lj : tower.levels) {
        Rational dev = rational_abs(correlation(s, m, li, lj) - correlation(v, m, li, lj));
        if (dev > cert.b_eff) cert.b_eff = dev;
      }
  cert.within_b = cert.b_eff <= cert.b;

  cert.shrunk_base = shrink_base(v, tower.base, n);
  cert.base_diff = sym_diff(tower.base, cert.shrunk_base).measure();
  cert.chain_base = cert.base_diff <= Rational(n - 2) * cert.b_eff;

  std::vector<CellSet> new_levels;
  for (std::int64_t i = 0; i < n; ++i) new_levels.push_back(v.apply_power(i, cert.shrunk_base));
  for (std::int64_t i = 0; i < n; ++i) {
    Rational d = sym_diff(tower.levels[static_cast<std::size_t>(i)], new_levels[static_cast<std::size_t>(i)]).measure();
    if (d > cert.max_level_diff) cert.max_level_diff = d;
  }
  cert.chain_levels = cert.max_level_diff <= Rational(n - 1) * cert.b_eff;

  for (std::size_t si = 0; si < sets.size(); ++si) {
    CellSet b_old = CellSet::empty(tower.n_space);
    CellSet b_new = CellSet::empty(tower.n_space);
    for (std::int64_t i = 0; i < n; ++i)
      if (approx[si].chosen[static_cast<std::size_t>(i)]) {
        b_old = unite(b_old, tower.levels[static_cast<std::size_t>(i)]);
        b_new = unite(b_new, new_levels[static_cast<std::size_t>(i)]);
      }
    Rational ud = sym_diff(b_old, b_new).measure();
    if (ud > cert.max_union_diff) cert.max_union_diff = ud;
    Rational acc = sym_diff(sets[si], b_new).measure();
    if (acc > cert.max_final_accuracy) cert.max_final_accuracy = acc;
  }
  cert.chain_unions = cert.max_union_diff <= Rational(n) * Rational(n - 1) * cert.b_eff;
  cert.chain_final = cert.max_final_accuracy < inv_k;
  cert.pass = cert.chain_base && cert.chain_levels && cert.chain_unions && cert.chain_final;
  return cert;
}

/// Window-truncated surrogate for the partial rigidity coefficient:
/// max_{1 <= i <= W} mu(A cap P^i A) / mu(A). A diagnostic, not a decision
/// procedure; the true coefficient is a limsup over all i.
inline Rational partial_rigidity_estimate(const GridMap& p, const CellSet& a, std::int64_t w) {
  if (a.size() == 0) throw std::invalid_argument("set must have positive measure");
  if (w < 1) throw std::invalid_argument("window must be >= 1");
  Rational best(0);
  for (std::int64_t i = 1; i <= w; ++i) {
    Rational r = Rational(BigInt(intersect(a, p.apply_power(i, a)).size()), BigInt(a.size()));
    if (r > best) best = r;
  }
  return best;
}

}  // namespace ergo

#endif  // ERGO_TOWERS_HPP
