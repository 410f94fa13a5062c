#ifndef ERGO_INDEPENDENCE_HPP
#define ERGO_INDEPENDENCE_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ergo/grid.hpp"
#include "ergo/rational.hpp"
#include "ergo/rng.hpp"

namespace ergo {

/// Indexed family of sets E_m on one grid; the index is typically the power m
/// of a transformation applied to a seed set.
struct SetFamily {
  std::uint32_t n = 0;
  std::vector<std::int64_t> indices;
  std::vector<CellSet> members;

  SetFamily() = default;
  SetFamily(std::uint32_t resolution, std::vector<std::int64_t> idx,
            std::vector<CellSet> sets)
      : n(resolution), indices(std::move(idx)), members(std::move(sets)) {
    if (indices.size() != members.size())
      throw std::invalid_argument("index/member count mismatch");
    for (const auto& s : members) require_same_space(n, s.n);
    for (std::size_t i = 0; i < indices.size(); ++i)
      for (std::size_t j = i + 1; j < indices.size(); ++j)
        if (indices[i] == indices[j])
          throw std::invalid_argument("family indices must be distinct");
  }

  static SetFamily powers(const GridMap& s, const CellSet& seed, std::int64_t window) {
    std::vector<std::int64_t> idx;
    std::vector<CellSet> sets;
    for (std::int64_t m = -window; m <= window; ++m) {
      idx.push_back(m);
      sets.push_back(s.apply_power(m, seed));
    }
    return SetFamily(s.resolution(), std::move(idx), std::move(sets));
  }

  std::size_t size() const { return members.size(); }
};

struct IndependenceReport {
  Rational deviation{0};
  std::vector<std::size_t> witness;          // positions into the family
  std::vector<bool> witness_complement;      // parallel to witness; well variant
  unsigned cardinality_bound = 0;
};

namespace detail {

struct PackedFamily {
  std::uint32_t n = 0;
  std::size_t words = 0;
  std::vector<std::vector<std::uint64_t>> bits;
  std::vector<std::size_t> counts;

  explicit PackedFamily(const SetFamily& f) : n(f.n), words((f.n + 63) / 64) {
    for (const auto& s : f.members) {
      std::vector<std::uint64_t> w(words, 0);
      for (auto c : s.cells) w[c >> 6] |= 1ULL << (c & 63);
      bits.push_back(std::move(w));
      counts.push_back(s.size());
    }
  }

  // Intersection count over positions in `sel`; comp[i] complements sel[i].
  std::size_t intersection_count(const std::vector<std::size_t>& sel,
                                 const std::vector<bool>& comp) const {
    std::size_t total = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t acc = ~0ULL;
      for (std::size_t i = 0; i < sel.size(); ++i) {
        std::uint64_t word = bits[sel[i]][w];
        acc &= comp[i] ? ~word : word;
      }
      if (w == words - 1 && (n & 63)) acc &= (1ULL << (n & 63)) - 1;
      total += static_cast<std::size_t>(std::popcount(acc));
    }
    return total;
  }
};

inline Rational product_measure(const PackedFamily& pf, const std::vector<std::size_t>& sel,
                                const std::vector<bool>& comp) {
  BigInt num = 1;
  BigInt den = 1;
  for (std::size_t i = 0; i < sel.size(); ++i) {
    num *= BigInt(comp[i] ? pf.n - pf.counts[sel[i]] : pf.counts[sel[i]]);
    den *= BigInt(pf.n);
  }
  return Rational(num, den);
}

template <typename Fn>
void for_each_combination(std::size_t n, std::size_t size, Fn&& fn) {
  std::vector<std::size_t> sel(size);
  for (std::size_t i = 0; i < size; ++i) sel[i] = i;
  for (;;) {
    fn(sel);
    std::size_t i = size;
    while (i > 0 && sel[i - 1] == n - size + i - 1) --i;
    if (i == 0) return;
    ++sel[i - 1];
    for (std::size_t j = i; j < size; ++j) sel[j] = sel[j - 1] + 1;
  }
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

constexpr std::uint64_t kScanBudget = 40'000'000ULL;

}  // namespace detail

/// Worst |mu(E_{m_1} cap ... cap E_{m_p}) - prod mu(E_{m_i})| over all
/// subsets of size 2..c with distinct indices. The family is collectionwise
/// delta-independent (up to cardinality c) iff the result is < delta.
inline IndependenceReport delta_deviation(const SetFamily& family, unsigned c) {
  if (c < 1) throw std::invalid_argument("cardinality bound must be >= 1");
  const std::size_t n = family.size();
  std::uint64_t work = 0;
  for (std::size_t s = 2; s <= std::min<std::size_t>(c, n); ++s)
    work += detail::binomial(n, s);
  if (work > detail::kScanBudget)
    throw std::invalid_argument("independence scan budget exceeded; lower c");

  detail::PackedFamily pf(family);
  IndependenceReport rep;
  rep.cardinality_bound = c;
  for (std::size_t s = 2; s <= std::min<std::size_t>(c, n); ++s) {
    std::vector<bool> comp(s, false);
    detail::for_each_combination(n, s, [&](const std::vector<std::size_t>& sel) {
      Rational actual(BigInt(pf.intersection_count(sel, comp)), BigInt(pf.n));
      Rational dev = rational_abs(actual - detail::product_measure(pf, sel, comp));
      if (dev > rep.deviation) {
        rep.deviation = dev;
        rep.witness = sel;
        rep.witness_complement.assign(s, false);
      }
    });
  }
  return rep;
}

/// As delta_deviation, but every subset is scanned with all 2^size
/// plain/complement patterns (the "well" variant).
inline IndependenceReport well_deviation(const SetFamily& family, unsigned c) {
  if (c < 1) throw std::invalid_argument("cardinality bound must be >= 1");
  const std::size_t n = family.size();
  std::uint64_t work = 0;
  for (std::size_t s = 2; s <= std::min<std::size_t>(c, n); ++s)
    work += detail::binomial(n, s) << s;
  if (work > detail::kScanBudget)
    throw std::invalid_argument("independence scan budget exceeded; lower c");

  detail::PackedFamily pf(family);
  IndependenceReport rep;
  rep.cardinality_bound = c;
  for (std::size_t s = 2; s <= std::min<std::size_t>(c, n); ++s) {
    detail::for_each_combination(n, s, [&](const std::vector<std::size_t>& sel) {
      for (std::uint32_t pat = 0; pat < (1u << s); ++pat) {
        std::vector<bool> comp(s);
        for (std::size_t i = 0; i < s; ++i) comp[i] = (pat >> i) & 1u;
        Rational actual(BigInt(pf.intersection_count(sel, comp)), BigInt(pf.n));
        Rational dev = rational_abs(actual - detail::product_measure(pf, sel, comp));
        if (dev > rep.deviation) {
          rep.deviation = dev;
          rep.witness = sel;
          rep.witness_complement = comp;
        }
      }
    });
  }
  return rep;
}

/// Re-evaluates a report's witness from scratch; used to confirm that stored
/// deviations reproduce.
inline Rational reverify_witness(const SetFamily& family, const IndependenceReport& rep) {
  if (rep.witness.empty()) return Rational(0);
  detail::PackedFamily pf(family);
  std::vector<bool> comp = rep.witness_complement.empty()
                               ? std::vector<bool>(rep.witness.size(), false)
                               : rep.witness_complement;
  Rational actual(BigInt(pf.intersection_count(rep.witness, comp)), BigInt(pf.n));
  return rational_abs(actual - detail::product_measure(pf, rep.witness, comp));
}

/// Audit of the subcollection lemma: every subcollection of cardinality <= c
/// is well collectionwise (c*delta)-independent when the family is
/// delta-independent at cardinality c. A violation is a hard failure.
struct CdeltaAudit {
  bool ok = false;
  Rational delta{0};      // plain deviation of the family at bound c
  Rational well{0};       // worst well deviation over subcollections of size <= c
  IndependenceReport well_report;
};

inline CdeltaAudit lemma_cdelta_check(const SetFamily& family, unsigned c) {
  CdeltaAudit audit;
  audit.delta = delta_deviation(family, c).deviation;
  // well_deviation at bound c already ranges over every subcollection of
  // size <= c together with all complement patterns.
  audit.well_report = well_deviation(family, c);
  audit.well = audit.well_report.deviation;
  audit.ok = audit.well <= Rational(c) * audit.delta;
  if (!audit.ok)
    throw std::logic_error("c*delta subcollection lemma violated (implementation bug)");
  return audit;
}

/// Randomized search for a half-measure set whose images under S are almost
/// independent: uniformly random N/2-subsets of cells, one stream per trial,
/// best candidate kept. Succeeds when the well deviation of the image family
/// {S^m A : |m| <= window} drops below delta at cardinality bound c.
struct HalfSetSearch {
  CellSet set;
  IndependenceReport report;
  bool success = false;
  unsigned trials_used = 0;
};

inline HalfSetSearch find_half_measure_independent_set(
    const GridMap& s, std::int64_t window, const Rational& delta, std::uint64_t seed,
    unsigned trials, unsigned cardinality_bound = 0) {
  const std::uint32_t n = s.resolution();
  if (n % 2 != 0) throw std::invalid_argument("half measure unattainable: N is odd");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const unsigned c = cardinality_bound == 0
                         ? static_cast<unsigned>(2 * window + 1)
                         : cardinality_bound;

  HalfSetSearch best;
  for (unsigned t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng::derive(seed, t);
    CellSet cand(n, random_subset(n, n / 2, rng));
    IndependenceReport rep = well_deviation(SetFamily::powers(s, cand, window), c);
    if (t == 0 || rep.deviation < best.report.deviation) {
      best.set = std::move(cand);
      best.report = std::move(rep);
    }
    best.trials_used = t + 1;
    if (best.report.deviation < delta) {
      best.success = true;
      break;
    }
  }
  return best;
}

}  // namespace ergo

#endif  // ERGO_INDEPENDENCE_HPP
