#include <doctest.h>

#include "ergo/independence.hpp"

using namespace ergo;

namespace {

// E_b = cells whose bit b is set; exactly independent by construction.
SetFamily digit_family(unsigned log2n, unsigned bits) {
  const std::uint32_t n = 1u << log2n;
  std::vector<std::int64_t> idx;
  std::vector<CellSet> sets;
  for (unsigned b = 0; b < bits; ++b) {
    std::vector<std::uint32_t> cells;
    for (std::uint32_t c = 0; c < n; ++c)
      if (c & (1u << b)) cells.push_back(c);
    idx.push_back(b);
    sets.emplace_back(n, std::move(cells));
  }
  return SetFamily(n, std::move(idx), std::move(sets));
}

CellSet random_cellset(std::uint32_t n, CounterRng& rng) {
  std::vector<std::uint32_t> cells;
  for (std::uint32_t c = 0; c < n; ++c)
    if (rng.next() & 1) cells.push_back(c);
  return CellSet(n, std::move(cells));
}

}  // namespace

TEST_CASE("delta deviation") {
  SetFamily digits = digit_family(8, 5);
  CHECK(delta_deviation(digits, 5).deviation == 0);

  // Two copies of a half-measure set under distinct indices.
  CellSet a(8, {0, 1, 2, 3});
  SetFamily twice(8, {0, 1}, {a, a});
  CHECK(delta_deviation(twice, 2).deviation == Rational(1, 4));

  SetFamily single(8, {0}, {a});
  CHECK(delta_deviation(single, 3).deviation == 0);
}

TEST_CASE("well deviation") {
  SetFamily digits = digit_family(8, 4);
  CHECK(well_deviation(digits, 4).deviation == 0);

  CellSet a(8, {0, 1, 2, 3});
  SetFamily pair(8, {0, 1}, {a, complement_of(a)});
  IndependenceReport rep = well_deviation(pair, 2);
  CHECK(rep.deviation == Rational(1, 4));
  CHECK(reverify_witness(pair, rep) == rep.deviation);
}

TEST_CASE("well deviation dominates delta deviation") {
  CounterRng rng = CounterRng::derive(37, 0);
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<std::int64_t> idx;
    std::vector<CellSet> sets;
    const std::size_t sz = 2 + rng.next_below(4);
    for (std::size_t i = 0; i < sz; ++i) {
      idx.push_back(static_cast<std::int64_t>(i));
      sets.push_back(random_cellset(128, rng));
    }
    SetFamily fam(128, std::move(idx), std::move(sets));
    CHECK(well_deviation(fam, 3).deviation >= delta_deviation(fam, 3).deviation);
  }
}

TEST_CASE("c-delta lemma audit") {
  SetFamily digits = digit_family(8, 4);
  CHECK(lemma_cdelta_check(digits, 3).ok);

  CellSet a(8, {0, 1, 2, 3});
  SetFamily pair(8, {0, 1}, {a, complement_of(a)});
  CdeltaAudit audit = lemma_cdelta_check(pair, 2);
  CHECK(audit.ok);
  CHECK(audit.delta == Rational(1, 4));
  CHECK(audit.well == Rational(1, 4));
}

TEST_CASE("scan budget guard") {
  SetFamily digits = digit_family(5, 5);
  // 32 copies would blow the budget; simulate by an absurd bound on a fake
  // large family instead: build 26 distinct singletons.
  std::vector<std::int64_t> idx;
  std::vector<CellSet> sets;
  for (std::uint32_t i = 0; i < 26; ++i) {
    idx.push_back(i);
    sets.push_back(CellSet(32, {i}));
  }
  SetFamily big(32, std::move(idx), std::move(sets));
  CHECK_THROWS_AS(well_deviation(big, 26), std::invalid_argument);
}

TEST_CASE("half-measure search on the identity must fail below 1/4") {
  GridMap id = GridMap::identity(64);
  HalfSetSearch res = find_half_measure_independent_set(id, 2, Rational(1, 5), 3, 4);
  CHECK_FALSE(res.success);
  CHECK(res.report.deviation >= Rational(1, 4));
  CHECK(res.set.measure() == Rational(1, 2));
}

TEST_CASE("half-measure search is deterministic and reproducible") {
  CounterRng rng = CounterRng::derive(41, 0);
  GridMap s = GridMap::random(1u << 10, rng);
  HalfSetSearch r1 = find_half_measure_independent_set(s, 2, Rational(1, 20), 99, 8);
  HalfSetSearch r2 = find_half_measure_independent_set(s, 2, Rational(1, 20), 99, 8);
  CHECK(r1.set == r2.set);
  CHECK(r1.report.deviation == r2.report.deviation);
  CHECK(r1.trials_used == r2.trials_used);
  CHECK(r1.set.measure() == Rational(1, 2));
  CHECK(reverify_witness(SetFamily::powers(s, r1.set, 2), r1.report) ==
        r1.report.deviation);
}

TEST_CASE("odd resolution is rejected") {
  // Resolutions are powers of two by construction, so exercise the message
  // through a direct precondition instead: N=2 window guard.
  GridMap s = GridMap::identity(4);
  CHECK_THROWS_AS(find_half_measure_independent_set(s, 0, Rational(1, 2), 1, 1),
                  std::invalid_argument);
}

TEST_CASE("well deviation is conjugation invariant") {
  CounterRng rng = CounterRng::derive(43, 0);
  const std::uint32_t n = 128;
  GridMap s = GridMap::random(n, rng);
  GridMap r = GridMap::random(n, rng);
  CellSet a = random_cellset(n, rng);
  GridMap conj = r.compose(s).compose(r.inverse());

  IndependenceReport plain = well_deviation(SetFamily::powers(s, a, 2), 3);
  IndependenceReport moved = well_deviation(SetFamily::powers(conj, r.image(a), 2), 3);
  CHECK(plain.deviation == moved.deviation);
}
