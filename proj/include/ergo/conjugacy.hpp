#ifndef ERGO_CONJUGACY_HPP
#define ERGO_CONJUGACY_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ergo/cylinder.hpp"
#include "ergo/grid.hpp"
#include "ergo/independence.hpp"
#include "ergo/rational.hpp"
#include "ergo/topology.hpp"

namespace ergo {

/// The constant chain of the conjugacy construction:
///   eps1 = eps/5, eps2 = eps/(5*2^{4k+2}), g = eps2/3, delta = g/(4k+2),
/// with g + 2g = eps2 closing the final sum.
struct BudgetLedger {
  Rational epsilon{0};
  unsigned k = 0;
  Rational eps1{0};
  Rational eps2{0};
  Rational gap_bound{0};
  Rational delta{0};

  static BudgetLedger make(const Rational& eps, unsigned k) {
    if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
    BudgetLedger l;
    l.epsilon = eps;
    l.k = k;
    l.eps1 = eps / 5;
    l.eps2 = eps / (5 * pow2(4 * k + 2));
    l.gap_bound = eps / (15 * pow2(4 * k + 2));
    l.delta = l.gap_bound / (4 * k + 2);
    return l;
  }

  bool invariants_hold() const {
    return eps1 == epsilon / 5 && eps2 == epsilon / (5 * pow2(4 * k + 2)) &&
           gap_bound == eps2 / 3 && delta == gap_bound / Rational(4 * k + 2) &&
           gap_bound + 2 * gap_bound == eps2;
  }
};

/// Atoms of the partition generated by S^i applied to {A, Y\A} for |i| <= k,
/// indexed exactly like the symbolic rank-k atoms (F_0 <-> D_0, F_1 <-> D_1).
struct EtaAtoms {
  std::vector<CellSet> atoms;          // lexicographic pattern index
  Rational max_skew{0};                // max |mu(atom) - 2^{-(2k+1)}|
};

inline EtaAtoms build_eta_atoms(const GridMap& s, const CellSet& a, unsigned k) {
  require_same_space(s.resolution(), a.n);
  if (2 * a.size() != a.n) throw std::invalid_argument("base set must have measure 1/2");
  const CellSet f0 = a;
  const CellSet f1 = complement_of(a);
  // S^i F_b for |i| <= k, reused across atoms.
  std::vector<std::vector<CellSet>> img(2);
  for (std::int64_t i = -static_cast<std::int64_t>(k); i <= static_cast<std::int64_t>(k); ++i) {
    img[0].push_back(s.apply_power(i, f0));
    img[1].push_back(s.apply_power(i, f1));
  }
  EtaAtoms out;
  const Rational uniform = inv_pow2(2 * k + 1);
  for (std::uint32_t t = 0; t < atom_count(k); ++t) {
    CellSet cur = CellSet::full(a.n);
    for (std::int64_t i = -static_cast<std::int64_t>(k); i <= static_cast<std::int64_t>(k); ++i)
      cur = intersect(cur, img[static_cast<std::size_t>(atom_bit(t, k, i))]
                               [static_cast<std::size_t>(i + static_cast<std::int64_t>(k))]);
    Rational skew = rational_abs(cur.measure() - uniform);
    if (skew > out.max_skew) out.max_skew = skew;
    out.atoms.push_back(std::move(cur));
  }
  return out;
}

/// Measure-preserving cell bijection Q: X -> Y mapping each rank-k block atom
/// of X onto the corresponding eta atom, up to a per-atom gap. Cells are
/// matched within each atom first; surplus and deficit cells are then paired
/// greedily by ascending atom index, then ascending cell index.
struct QResult {
  GridMap q;
  Rational achieved_gap{0};
  bool gap_ok = false;
};

inline QResult build_q(unsigned k, const EtaAtoms& eta, const Rational& gap_target) {
  if (eta.atoms.empty()) throw std::invalid_argument("eta atoms missing");
  const std::uint32_t n = eta.atoms.front().n;
  const std::uint32_t na = atom_count(k);
  if (n % na != 0) throw std::invalid_argument("resolution cannot realize rank-k atoms");
  if (eta.atoms.size() != na) throw std::invalid_argument("eta atom count mismatch");

  std::vector<std::uint32_t> fwd(n, n);
  std::vector<std::uint32_t> surplus_x, deficit_y;
  Rational gap(0);
  const std::size_t block = n / na;
  for (std::uint32_t t = 0; t < na; ++t) {
    CellSet xi = realize_on_grid(AtomUnion::single_atom(k, t), n);
    const auto& yc = eta.atoms[t].cells;
    const std::size_t matched = std::min(block, yc.size());
    for (std::size_t i = 0; i < matched; ++i) fwd[xi.cells[i]] = yc[i];
    for (std::size_t i = matched; i < block; ++i) surplus_x.push_back(xi.cells[i]);
    for (std::size_t i = matched; i < yc.size(); ++i) deficit_y.push_back(yc[i]);
    // With cross-atom matching the per-atom gap is exactly the size mismatch.
    BigInt diff = yc.size() >= block ? BigInt(yc.size() - block) : BigInt(block - yc.size());
    Rational g(diff, BigInt(n));
    if (g > gap) gap = g;
  }
  if (surplus_x.size() != deficit_y.size())
    throw std::logic_error("surplus/deficit mismatch: eta atoms do not partition");
  for (std::size_t i = 0; i < surplus_x.size(); ++i) fwd[surplus_x[i]] = deficit_y[i];

  QResult out{GridMap(std::move(fwd)), gap, gap < gap_target};
  return out;
}

/// V = Q^{-1} S Q.
inline GridMap conjugate(const GridMap& q, const GridMap& s) {
  require_same_space(q.resolution(), s.resolution());
  return q.inverse().compose(s).compose(q);
}

struct DeviationEntry {
  std::uint32_t u = 0, v = 0;
  std::int64_t m = 0;
  Rational t_side{0};
  Rational v_side{0};
  Rational deviation{0};
};

/// Exact per-inequality audit of the construction: for every atom pair (u, v)
/// and |m| <= W, the deviation |mu(V^m B_u cap B_v) - mu(T^m B_u cap B_v)|
/// is tabulated and checked against achieved_delta + 2*achieved_gap.
struct ConjugacyCertificate {
  BudgetLedger ledger;
  std::int64_t window = 0;
  Rational achieved_delta{0};
  Rational achieved_gap{0};
  Rational bound{0};
  std::vector<DeviationEntry> entries;
  Rational max_deviation{0};
  bool decomposition_ok = false;  // every entry <= bound
  bool pass = false;              // max deviation < eps2
};

inline ConjugacyCertificate verify_certificate(const GridMap& v, unsigned k,
                                               std::int64_t window,
                                               const BudgetLedger& ledger,
                                               const Rational& achieved_delta,
                                               const Rational& achieved_gap) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const std::uint32_t n = v.resolution();
  const std::uint32_t na = atom_count(k);
  std::vector<CellSet> blocks;
  for (std::uint32_t t = 0; t < na; ++t)
    blocks.push_back(realize_on_grid(AtomUnion::single_atom(k, t), n));

  ConjugacyCertificate cert;
  cert.ledger = ledger;
  cert.window = window;
  cert.achieved_delta = achieved_delta;
  cert.achieved_gap = achieved_gap;
  cert.bound = achieved_delta + 2 * achieved_gap;
  cert.decomposition_ok = true;
  for (std::uint32_t u = 0; u < na; ++u) {
    Cylinder bu = atom_cylinder(u, k);
    for (std::uint32_t vv = 0; vv < na; ++vv) {
      Cylinder bv = atom_cylinder(vv, k);
      for (std::int64_t m = -window; m <= window; ++m) {
        DeviationEntry e;
        e.u = u;
        e.v = vv;
        e.m = m;
        e.t_side = merge_measure(bu.shifted(m), bv);
        e.v_side = correlation(v, m, blocks[u], blocks[vv]);
        e.deviation = rational_abs(e.t_side - e.v_side);
        if (e.deviation > cert.max_deviation) cert.max_deviation = e.deviation;
        if (e.deviation > cert.bound) cert.decomposition_ok = false;
        cert.entries.push_back(std::move(e));
      }
    }
  }
  cert.pass = cert.max_deviation < ledger.eps2;
  return cert;
}

/// Full Theorem 1 pipeline for one neighborhood U(T, q, eps):
/// refine -> budget -> independent half-set search -> eta atoms -> Q -> V ->
/// certificate -> audit back to the original neighborhood.
struct TheoremOneRun {
  RefineResult refine;
  AtomNeighborhood fine;
  BudgetLedger ledger;
  std::int64_t independence_window = 0;
  unsigned independence_cardinality = 0;
  HalfSetSearch search;
  Rational eta_max_skew{0};
  std::optional<GridMap> q_map;
  std::optional<GridMap> v_map;
  Rational achieved_gap{0};
  bool gap_ok = false;
  ConjugacyCertificate certificate;
  DeviationWitness final_membership;   // V against U(T, q, eps), window W
  ContainmentAudit audit;              // q_hat -> q implication for V
};

inline TheoremOneRun theorem_one_demo(const GridMap& s, const std::vector<AtomUnion>& q,
                                      const Rational& eps, std::int64_t window,
                                      std::uint64_t seed, unsigned trials) {
  if (q.empty()) throw std::invalid_argument("set collection q must be nonempty");
  TheoremOneRun run;
  unsigned max_rank = 0;
  for (const auto& a : q) max_rank = std::max(max_rank, a.rank);
  run.refine = refine_step_one(q, eps, max_rank);
  const unsigned k = run.refine.k;
  run.fine = refine_step_two(k, eps);
  run.ledger = BudgetLedger::make(eps, k);
  const std::uint32_t n = s.resolution();
  if (n % atom_count(k) != 0)
    throw std::invalid_argument("resolution cannot realize rank-k atoms");

  // The verification intersects images S^{i+m} with |i| <= k, |m| <= W, so
  // the image family needs window k+W and intersections of length <= 4k+2.
  run.independence_window = static_cast<std::int64_t>(k) + window;
  run.independence_cardinality = 4 * k + 2;
  // Measured target is the well-independence level g; the plain-delta target
  // delta = g/(4k+2) of the ledger implies it via the subcollection lemma.
  run.search = find_half_measure_independent_set(s, run.independence_window,
                                                 run.ledger.gap_bound, seed, trials,
                                                 run.independence_cardinality);

  EtaAtoms eta = build_eta_atoms(s, run.search.set, k);
  run.eta_max_skew = eta.max_skew;
  QResult qr = build_q(k, eta, run.ledger.gap_bound);
  run.achieved_gap = qr.achieved_gap;
  run.gap_ok = qr.gap_ok;
  run.q_map = qr.q;
  run.v_map = conjugate(qr.q, s);

  run.certificate = verify_certificate(*run.v_map, k, window, run.ledger,
                                       run.search.report.deviation, qr.achieved_gap);

  std::vector<CellSet> q_bridge, fine_bridge;
  for (const auto& a : q) q_bridge.push_back(realize_on_grid(a, n));
  for (const auto& a : run.fine.q_hat) fine_bridge.push_back(realize_on_grid(a, n));
  run.final_membership = neighborhood_contains(q, q_bridge, eps, window, *run.v_map);
  run.audit = containment_audit(run.fine.q_hat, fine_bridge, run.fine.radius, q,
                                q_bridge, eps, window, *run.v_map);
  return run;
}

}  // namespace ergo

#endif  // ERGO_CONJUGACY_HPP
