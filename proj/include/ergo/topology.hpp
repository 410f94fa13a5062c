#ifndef ERGO_TOPOLOGY_HPP
#define ERGO_TOPOLOGY_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ergo/cylinder.hpp"
#include "ergo/grid.hpp"
#include "ergo/rational.hpp"

namespace ergo {

/// Finite truncation of a countable generating collection {A_i}; the set at
/// position i (1-indexed) carries weight 2^{-i}. The dropped tail of the
/// weighted sums is bounded by 2^{-|basis|}.
struct Basis {
  std::vector<CellSet> sets;

  /// Dyadic intervals of the grid: halves, quarters, ..., down to single cells
  /// or `max_sets` entries, whichever comes first.
  static Basis dyadic(std::uint32_t n, std::size_t max_sets = 16) {
    Basis b;
    for (std::uint32_t len = n / 2; len >= 1 && b.sets.size() < max_sets; len /= 2)
      for (std::uint32_t start = 0; start < n && b.sets.size() < max_sets; start += len) {
        std::vector<std::uint32_t> cells(len);
        for (std::uint32_t i = 0; i < len; ++i) cells[i] = start + i;
        b.sets.emplace_back(n, std::move(cells));
      }
    return b;
  }

  Rational tail_bound() const { return inv_pow2(static_cast<unsigned>(sets.size())); }
};

inline Rational metric_d(const GridMap& p, const GridMap& r, const Basis& basis) {
  require_same_space(p.resolution(), r.resolution());
  Rational sum(0);
  for (std::size_t i = 0; i < basis.sets.size(); ++i) {
    const CellSet& a = basis.sets[i];
    Rational term = sym_diff(p.image(a), r.image(a)).measure() +
                    sym_diff(p.preimage(a), r.preimage(a)).measure();
    sum += inv_pow2(static_cast<unsigned>(i + 1)) * term;
  }
  return sum;
}

inline Rational metric_a(const GridMap& p, const GridMap& r, const Basis& basis) {
  require_same_space(p.resolution(), r.resolution());
  Rational sum(0);
  for (std::size_t i = 0; i < basis.sets.size(); ++i)
    for (std::size_t j = 0; j < basis.sets.size(); ++j) {
      Rational dev = rational_abs(correlation(p, 1, basis.sets[i], basis.sets[j]) -
                                  correlation(r, 1, basis.sets[i], basis.sets[j]));
      sum += inv_pow2(static_cast<unsigned>(i + j + 2)) * dev;
    }
  return sum;
}

/// tau_W(P,R) = d(P,R) + max_{|n| <= W} a(P^n, R^n); the sup over all integer
/// powers is truncated to the window W.
inline Rational metric_tau(const GridMap& p, const GridMap& r, const Basis& basis,
                           std::int64_t w) {
  if (w < 1) throw std::invalid_argument("window must be >= 1");
  Rational best(0);
  for (std::int64_t n = -w; n <= w; ++n) {
    Rational v = metric_a(p.power(n), r.power(n), basis);
    if (v > best) best = v;
  }
  return metric_d(p, r, basis) + best;
}

/// Worst deviation over the (n, A, B) scan of a neighborhood check. Ties are
/// broken by the smallest (n, a_index, b_index), so the witness is
/// deterministic under any evaluation order.
struct DeviationWitness {
  bool member = false;
  Rational worst{0};
  std::int64_t n = 0;
  std::size_t a_index = 0, b_index = 0;
};

/// U(T, q, eps) membership with a GridMap center, truncated to |n| <= W.
inline DeviationWitness neighborhood_contains(const GridMap& center,
                                              const std::vector<CellSet>& q,
                                              const Rational& eps, std::int64_t w,
                                              const GridMap& r) {
  if (q.empty()) throw std::invalid_argument("set collection q must be nonempty");
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  if (w < 1) throw std::invalid_argument("window must be >= 1");
  DeviationWitness out;
  for (std::int64_t n = -w; n <= w; ++n)
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) {
        Rational dev = rational_abs(correlation(center, n, q[i], q[j]) -
                                    correlation(r, n, q[i], q[j]));
        if (dev > out.worst) {
          out.worst = dev;
          out.n = n;
          out.a_index = i;
          out.b_index = j;
        }
      }
  out.member = out.worst < eps;
  return out;
}

/// U(T, q, eps) membership with the Bernoulli shift as center. The sets of q
/// live in the symbolic atom algebra; `bridge` supplies the CellSet on R's
/// grid corresponding to each element of q.
inline DeviationWitness neighborhood_contains(const std::vector<AtomUnion>& q,
                                              const std::vector<CellSet>& bridge,
                                              const Rational& eps, std::int64_t w,
                                              const GridMap& r) {
  if (q.empty()) throw std::invalid_argument("set collection q must be nonempty");
  if (q.size() != bridge.size())
    throw std::invalid_argument("bridge must map every set of q");
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  if (w < 1) throw std::invalid_argument("window must be >= 1");
  DeviationWitness out;
  for (std::int64_t n = -w; n <= w; ++n)
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) {
        Rational dev = rational_abs(symbolic_shift_intersection(q[i], q[j], n) -
                                    correlation(r, n, bridge[i], bridge[j]));
        if (dev > out.worst) {
          out.worst = dev;
          out.n = n;
          out.a_index = i;
          out.b_index = j;
        }
      }
  out.member = out.worst < eps;
  return out;
}

/// First refinement step: replace each A_j by a rank-k_j-measurable Ã_j with
/// mu(A_j sym-diff Ã_j) < eps/5; k is the largest rank used.
struct RefineResult {
  std::vector<AtomUnion> q_tilde;
  std::vector<unsigned> ranks;
  std::vector<Rational> precisions;
  unsigned k = 0;
};

inline RefineResult refine_step_one(const std::vector<AtomUnion>& q, const Rational& eps,
                                    unsigned max_rank) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  const Rational target = eps / 5;
  RefineResult out;
  for (const AtomUnion& a : q) {
    bool done = false;
    for (unsigned kj = 0; kj <= std::min(max_rank, a.rank) && !done; ++kj) {
      Approximation approx = best_atom_approximation(a, kj);
      if (approx.error < target) {
        out.q_tilde.push_back(approx.set);
        out.ranks.push_back(kj);
        out.precisions.push_back(approx.error);
        if (kj > out.k) out.k = kj;
        done = true;
      }
    }
    if (!done)
      throw std::runtime_error("precision unattainable at rank " + std::to_string(max_rank));
  }
  return out;
}

/// Second refinement step: q_hat = all rank-k atoms, radius eps/(5*2^{4k+2}).
struct AtomNeighborhood {
  unsigned k = 0;
  std::vector<AtomUnion> q_hat;
  Rational radius{0};
};

inline AtomNeighborhood refine_step_two(unsigned k, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  AtomNeighborhood out;
  out.k = k;
  for (std::uint32_t t = 0; t < atom_count(k); ++t)
    out.q_hat.push_back(AtomUnion::single_atom(k, t));
  out.radius = eps / (5 * pow2(4 * k + 2));
  return out;
}

/// Checks the implication "membership in the finer neighborhood => membership
/// in the coarser one" for a given R. A violation is a hard failure: the
/// containment holds unconditionally, so it can only mean a bug here.
struct ContainmentAudit {
  DeviationWitness fine;
  DeviationWitness coarse;
};

inline ContainmentAudit containment_audit(const std::vector<AtomUnion>& fine_q,
                                          const std::vector<CellSet>& fine_bridge,
                                          const Rational& fine_eps,
                                          const std::vector<AtomUnion>& coarse_q,
                                          const std::vector<CellSet>& coarse_bridge,
                                          const Rational& coarse_eps, std::int64_t w,
                                          const GridMap& r) {
  ContainmentAudit audit;
  audit.fine = neighborhood_contains(fine_q, fine_bridge, fine_eps, w, r);
  audit.coarse = neighborhood_contains(coarse_q, coarse_bridge, coarse_eps, w, r);
  if (audit.fine.member && !audit.coarse.member)
    throw std::logic_error("containment violated: fine membership without coarse");
  return audit;
}

}  // namespace ergo

#endif  // ERGO_TOPOLOGY_HPP
