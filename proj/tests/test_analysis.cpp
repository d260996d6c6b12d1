#include <doctest.h>

#include <algorithm>

#include "dynsense/analysis.hpp"
#include "dynsense/rng.hpp"

using namespace dynsense;
using namespace dynsense::analysis;
using namespace dynsense::systems;

namespace {

CircleCoord half() { return CircleCoord(u128{1} << 63, 64); }

std::vector<families::Elem> evens_below(std::int64_t n) {
  std::vector<families::Elem> v;
  for (std::int64_t i = 0; i < n; i += 2) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("return times of the period-two rotation") {
  const RotationSystem rot(half());
  const CircleBall u{CircleCoord::zero(), Dyadic::pow2_neg(3)};
  const auto times = return_times(rot, CircleCoord::zero(), u, 11);
  CHECK(times.elements() == evens_below(11));
}

TEST_CASE("return times with a whole-space neighborhood") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const CircleBall u{CircleCoord::zero(), Dyadic::one()};
  const auto times = return_times(rot, CircleCoord::zero(), u, 32);
  CHECK(times == families::WindowSet::full(32));
}

TEST_CASE("return times in the skew product are nonempty") {
  const SkewSystem sk(CircleCoord::sqrt2_minus_one(64), 2);
  const TorusPoint x = TorusPoint::zero(2, 64);
  const TorusBall u{x, Dyadic::pow2_neg(6)};
  const auto times = return_times(sk, x, u, 10'000);
  CHECK(!times.empty());
  CHECK(times.contains(0));
  // simulation is its own oracle: re-check every reported time directly
  for (const auto n : times.elements())
    CHECK(torus_metric(sk.apply(x, n), x) < Dyadic::pow2_neg(6));
}

TEST_CASE("return times on the shift with a cylinder neighborhood") {
  const MorseShift shift;
  const CylinderSpec zero_here{0, {0}};
  const auto times = return_times(shift, SymbolicPoint::morse_omega(), zero_here, 64);
  for (std::int64_t n = 0; n < 64; ++n)
    CHECK(times.contains(n) == (morse_symbol(n) == 0));
}

TEST_CASE("hitting times: same neighborhood contains zero") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const CircleBall u{CircleCoord::zero(), Dyadic::pow2_neg(4)};
  const auto times = hitting_times(rot, u, u, 16, 5);
  CHECK(times.contains(0));
}

TEST_CASE("hitting times of opposite arcs under the period-two rotation") {
  const RotationSystem rot(half());
  const CircleBall u{CircleCoord::zero(), Dyadic::pow2_neg(3)};
  const CircleBall v{half(), Dyadic::pow2_neg(3)};
  const auto times = hitting_times(rot, u, v, 20, 7);
  for (std::int64_t n = 0; n < 20; ++n) CHECK(times.contains(n) == (n % 2 == 1));
}

TEST_CASE("hitting times cover the center's return times") {
  const SkewSystem sk(CircleCoord::sqrt2_minus_one(64), 2);
  const TorusPoint x = TorusPoint::zero(2, 64);
  const TorusBall u{x, Dyadic::pow2_neg(6)};
  const auto center_returns = return_times(sk, x, u, 2000);
  const auto hits = hitting_times(sk, u, u, 2000, 3);
  for (const auto n : center_returns.elements()) CHECK(hits.contains(n));
}

TEST_CASE("divergence profile of identical points is empty") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const auto prof = divergence_profile(rot, CircleCoord::zero(), CircleCoord::zero(),
                                       Dyadic::pow2_neg(4), 100);
  CHECK(prof.exceed.empty());
  CHECK(prof.ambiguity_count == 0);
  for (const auto& mv : prof.distances) CHECK(mv.bound == Dyadic::zero());
}

TEST_CASE("rotation divergence is all-or-nothing") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const CircleCoord x = CircleCoord::zero();
  const CircleCoord y(u128{1} << 58, 64);  // distance 1/64
  const auto below = divergence_profile(rot, x, y, Dyadic::pow2_neg(5), 200);
  CHECK(below.exceed.empty());
  const auto above = divergence_profile(rot, x, y, Dyadic::pow2_neg(7), 200);
  CHECK(above.exceed == families::WindowSet::full(200));
}

TEST_CASE("divergence profile of the flipped Morse pair") {
  const MorseShift shift(16);
  const auto prof = divergence_profile(shift, SymbolicPoint::morse_omega().flipped(),
                                       SymbolicPoint::eta(), Dyadic::half(), 50);
  CHECK(prof.exceed == families::WindowSet::full(50));
  for (const auto& mv : prof.distances)
    CHECK(mv == MetricValue::exact_value(Dyadic::one()));
}

TEST_CASE("signed divergence window reindexes correctly") {
  const MorseShift shift(16);
  const auto prof = divergence_profile(shift, SymbolicPoint::morse_omega().flipped(),
                                       SymbolicPoint::eta(), Dyadic::half(),
                                       /*n_forward=*/16, /*n_back=*/8);
  CHECK(prof.exceed.window_end() == 24);
  // negative times carry distance 2^n < 1/2; nonnegative times diverge
  for (std::int64_t i = 0; i < 24; ++i)
    CHECK(prof.exceed.contains(i) == (i >= 8));
  CHECK(prof.ambiguity_count == 0);
}

TEST_CASE("ambiguity counting for scan-limited distances") {
  const MorseShift shift(2);  // radius too small to see differences far out
  // omega and eta agree on all nonnegative coordinates, so far to the right
  // of the origin a radius-2 scan can only produce the bound 2^-3
  const auto p = SymbolicPoint::morse_omega().shifted(40);
  const auto q = SymbolicPoint::eta().shifted(40);
  const auto prof = divergence_profile(shift, p, q, Dyadic::pow2_neg(2), 4);
  CHECK(prof.exceed.empty());
  CHECK(prof.ambiguity_count == 0);  // bound 2^-3 <= 2^-2 certifies non-exceedance
  const auto tight = divergence_profile(shift, p, q, Dyadic::pow2_neg(5), 4);
  // bound 2^-3 straddles the threshold 2^-5: every time is ambiguous
  CHECK(tight.exceed.empty());
  CHECK(tight.ambiguity_count == 4);
}

TEST_CASE("partition: exceed + certified-below + ambiguous covers the window") {
  const MorseShift shift(3);
  const auto prof =
      divergence_profile(shift, SymbolicPoint::morse_omega().shifted(-10),
                         SymbolicPoint::eta().shifted(-10), Dyadic::pow2_neg(5), 20);
  std::int64_t below = 0;
  for (const auto& mv : prof.distances)
    if (mv.certified_not_above(prof.delta)) ++below;
  CHECK(static_cast<std::int64_t>(prof.exceed.size()) + below +
            prof.ambiguity_count ==
        20);
}

TEST_CASE("sensitivity set of a rotation is empty at delta >= diameter") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const CircleBall u{CircleCoord::zero(), Dyadic::pow2_neg(6)};
  CHECK(sensitivity_set(rot, u, Dyadic::pow2_neg(5), 4096, 16).empty());
}

TEST_CASE("sensitivity set of a rotation fills up below the sample diameter") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const CircleBall u{CircleCoord::zero(), Dyadic::pow2_neg(4)};
  // samples at the lattice ends are ~ 2^-3 apart, far above 2^-9
  const auto s = sensitivity_set(rot, u, Dyadic::pow2_neg(9), 64, 9);
  CHECK(s == families::WindowSet::full(64));
}

TEST_CASE("skew sensitivity times are certified by recomputation") {
  const SkewSystem sk(CircleCoord::sqrt2_minus_one(64), 2);
  const TorusBall u{TorusPoint::zero(2, 64), Dyadic::pow2_neg(7)};
  const Dyadic delta = Dyadic::pow2_neg(2);
  const auto s = sensitivity_set(sk, u, delta, 3000, 4);
  CHECK(!s.empty());
  const auto samples = sk.sample(u, 4);
  for (std::int64_t idx = 0; idx < 20 && idx < static_cast<std::int64_t>(s.size());
       ++idx) {
    const auto n = s.elements()[static_cast<std::size_t>(idx)];
    bool exceed = false;
    for (std::size_t i = 0; i < samples.size() && !exceed; ++i)
      for (std::size_t j = i + 1; j < samples.size() && !exceed; ++j)
        exceed = delta < torus_metric(sk.apply(samples[i], n), sk.apply(samples[j], n));
    CHECK(exceed);
  }
}

TEST_CASE("adding grid samples never removes reported times") {
  // the lattices for 3, 5 and 9 points per axis nest when the radius is a
  // power of two, so the reported sets must grow with the grid
  const SkewSystem sk(CircleCoord::sqrt2_minus_one(64), 2);
  const TorusBall u{TorusPoint::zero(2, 64), Dyadic::pow2_neg(6)};
  const Dyadic delta = Dyadic::pow2_neg(2);
  const auto coarse = sensitivity_set(sk, u, delta, 2000, 3);
  const auto mid = sensitivity_set(sk, u, delta, 2000, 5);
  const auto fine = sensitivity_set(sk, u, delta, 2000, 9);
  for (const auto n : coarse.elements()) CHECK(mid.contains(n));
  for (const auto n : mid.elements()) CHECK(fine.contains(n));

  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const CircleBall cu{CircleCoord::zero(), Dyadic::pow2_neg(5)};
  const auto h_coarse = hitting_times(rot, cu, cu, 500, 3);
  const auto h_fine = hitting_times(rot, cu, cu, 500, 5);
  for (const auto n : h_coarse.elements()) CHECK(h_fine.contains(n));
}

TEST_CASE("proximality of identical points is zero") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const auto r = proximality_inf(rot, CircleCoord::zero(), CircleCoord::zero(), 50);
  CHECK(r.min == MetricValue::exact_value(Dyadic::zero()));
  CHECK(r.argmin == 0);
}

TEST_CASE("rotation proximality is constant with argmin zero") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const CircleCoord y(u128{1} << 60, 64);
  const auto r = proximality_inf(rot, CircleCoord::zero(), y, 100);
  CHECK(r.min == MetricValue::exact_value(Dyadic::pow2_neg(4)));
  CHECK(r.argmin == 0);
}

TEST_CASE("backward proximality of the Morse pair decays geometrically") {
  const MorseShift shift(64);
  const auto r =
      proximality_inf(shift, SymbolicPoint::morse_omega().flipped(),
                      SymbolicPoint::eta(), 32, /*direction=*/-1);
  CHECK(r.min == MetricValue::exact_value(Dyadic::pow2_neg(32)));
  CHECK(r.argmin == 32);
}

TEST_CASE("rp witness for identical points is immediate") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const auto w = rp_witness_search(rot, CircleCoord::zero(), CircleCoord::zero(), 2,
                                   Dyadic::pow2_neg(4), 4, 3);
  REQUIRE(w.has_value());
  CHECK(w->combos.size() == 3);
  for (const auto& [eps, mv] : w->combos) CHECK(mv.bound < Dyadic::pow2_neg(4));
}

TEST_CASE("rp witness exists for a skew pair sharing the first coordinate") {
  const SkewSystem sk(CircleCoord::sqrt2_minus_one(64), 2);
  const TorusPoint x = TorusPoint::zero(2, 64);
  TorusPoint y = x;
  y.set_coord(1, CircleCoord(u128{1} << 63, 64));  // second coordinates 1/2 apart
  const auto w =
      rp_witness_search(sk, x, y, 1, Dyadic::pow2_neg(4), 64, 8);
  REQUIRE(w.has_value());
  // re-verify the reported combos from scratch
  for (const auto& [eps, mv] : w->combos) {
    REQUIRE(eps.size() == 1);
    const auto n = w->times[0];
    const auto d = torus_metric(sk.apply(w->x_prime, n), sk.apply(w->y_prime, n));
    CHECK(d == mv.bound);
    CHECK(d < Dyadic::pow2_neg(4));
  }
}

TEST_CASE("rp witness absent when first coordinates are pinned apart") {
  const SkewSystem sk(CircleCoord::sqrt2_minus_one(64), 2);
  const TorusPoint x = TorusPoint::zero(2, 64);
  TorusPoint y = x;
  y.set_coord(0, CircleCoord(u128{1} << 62, 64));  // first coordinates 1/4 apart
  // the first-coordinate gap is invariant, so no witness can exist at 1/16
  const auto w = rp_witness_search(sk, x, y, 1, Dyadic::pow2_neg(4), 16, 4);
  CHECK(!w.has_value());
}

TEST_CASE("pigeonhole recurrence: period two") {
  const auto pair = pigeonhole_recurrence(half(), CircleCoord::zero(),
                                          Dyadic::pow2_neg(2),
                                          std::vector<std::int64_t>{1, 2, 3});
  REQUIRE(pair.has_value());
  CHECK(pair->bucket_count == 8);
  CHECK(pair->time_large == 3);
  CHECK(pair->time_small == 1);
}

TEST_CASE("pigeonhole recurrence: singleton has no pair") {
  CHECK(!pigeonhole_recurrence(half(), CircleCoord::zero(), Dyadic::pow2_neg(2),
                               std::vector<std::int64_t>{7})
             .has_value());
}

TEST_CASE("pigeonhole guarantee: more times than buckets always yields a pair") {
  Rng rng(71);
  const CircleCoord alpha = CircleCoord::sqrt2_minus_one(64);
  const CircleCoord x0 = CircleCoord::zero();
  const Dyadic eps = Dyadic::pow2_neg(5);
  const std::int64_t k = 64;  // ceil(1 / (eps/2))
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::int64_t> s;
    while (static_cast<std::int64_t>(s.size()) < k + 1) {
      const auto v = 1 + static_cast<std::int64_t>(rng.below(1'000'000));
      if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
    }
    const auto pair = pigeonhole_recurrence(alpha, x0, eps, s);
    REQUIRE(pair.has_value());
    CHECK(pair->bucket_count == k);
    const auto moved =
        rotation_iterate(x0, alpha, pair->time_large - pair->time_small);
    CHECK(circle_metric(moved, x0) < eps);
  }
}

TEST_CASE("cell space construction and measures") {
  CHECK_THROWS_AS(CellSpace({Rational{1, 2}}), UsageError);
  CHECK_THROWS_AS(CellSpace({Rational{3, 4}, Rational{1, 2}}), UsageError);
  const CellSpace space({Rational{1, 4}, Rational{1, 4}, Rational{1, 2}});
  CHECK(space.measure(CellSet{0, 2}) == Rational{3, 4});
  CHECK(space.measure(CellSet{}) == Rational{0});
}

TEST_CASE("gillis trivial cases") {
  const int m = 10;
  std::vector<Rational> w(m, Rational{1, m});
  const CellSpace space(w);
  const CellSet e{0, 1, 2};  // measure 3/10
  SUBCASE("identical sets intersect in themselves") {
    const std::vector<CellSet> sets(5, e);
    const auto out =
        gillis_select(space, sets, Rational{3, 10}, 3, Rational{1, 100});
    REQUIRE(out.selection.has_value());
    CHECK(out.exhaustive);
    CHECK(out.selection->measure == Rational{3, 10});
  }
  SUBCASE("k = 1 returns the first set") {
    const std::vector<CellSet> sets{e, CellSet{3, 4, 5}};
    const auto out =
        gillis_select(space, sets, Rational{3, 10}, 1, Rational{1, 100});
    REQUIRE(out.selection.has_value());
    CHECK(out.selection->indices == std::vector<int>{0});
  }
  SUBCASE("precondition violation") {
    const std::vector<CellSet> sets{CellSet{0}};
    CHECK_THROWS_AS(
        gillis_select(space, sets, Rational{3, 10}, 1, Rational{1, 100}),
        UsageError);
  }
}

TEST_CASE("gillis exhaustive absence is genuine") {
  // two disjoint sets of measure 1/2: intersection measure 0 < 1/4 - eps
  const CellSpace space({Rational{1, 2}, Rational{1, 2}});
  const std::vector<CellSet> sets{CellSet{0}, CellSet{1}};
  const auto out =
      gillis_select(space, sets, Rational{1, 2}, 2, Rational{1, 100});
  CHECK(out.exhaustive);
  CHECK(!out.selection.has_value());
}

TEST_CASE("gillis beam path on a planted instance") {
  // sets 100..109 share a heavy common core; C(110, 6) is far beyond the
  // exhaustive limit, so the beam strategy has to find it
  const int m = 40;
  std::vector<Rational> w(m, Rational{1, m});
  const CellSpace space(w);
  std::vector<CellSet> sets;
  CellSet core;
  for (std::uint32_t c = 0; c < 12; ++c) core.push_back(c);
  for (int i = 0; i < 110; ++i) {
    if (i >= 100) {
      sets.push_back(core);
    } else {
      // spread singleton-extended sets of measure 12/40
      CellSet s;
      for (std::uint32_t c = 0; c < 12; ++c)
        s.push_back((c + static_cast<std::uint32_t>(i)) %
                    static_cast<std::uint32_t>(m));
      std::sort(s.begin(), s.end());
      sets.push_back(s);
    }
  }
  const auto out = gillis_select(space, sets, Rational{12, 40}, 6,
                                 Rational{1, 10000000},
                                 /*exhaustive_limit=*/100000);
  CHECK(!out.exhaustive);
  REQUIRE(out.selection.has_value());
  CHECK(out.selection->measure >= Rational{12, 40}.pow(6) - Rational{1, 10000000});
}

TEST_CASE("ip overlap search on rotations") {
  SUBCASE("identity rotation returns the smallest subset sum") {
    const RotationSystem rot(CircleCoord::zero());
    const CircleBall u{CircleCoord::zero(), Dyadic::pow2_neg(3)};
    const auto hit =
        ip_overlap_search(rot, u, families::GeneratorSeq{{3, 5}}, 256);
    REQUIRE(hit.has_value());
    CHECK(hit->q == 3);
    CHECK(hit->overlap_lower == hit->u_lower);
  }
  SUBCASE("period two returns to itself on even sums") {
    const RotationSystem rot(half());
    const CircleBall u{CircleCoord::zero(), Dyadic::from_parts(3, 4)};  // 3/16 arc
    const auto hit = ip_overlap_search(rot, u, families::GeneratorSeq{{2}}, 256);
    REQUIRE(hit.has_value());
    CHECK(hit->q == 2);
    CHECK(hit->overlap_lower == hit->u_lower);
  }
  SUBCASE("irrational rotation: overlap certified and stable under refinement") {
    const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
    const CircleBall u{CircleCoord::zero(), Dyadic::from_parts(5, 5)};  // 5/32
    const auto hit = ip_overlap_search(
        rot, u, families::GeneratorSeq{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}, 512);
    REQUIRE(hit.has_value());
    // re-verify on a twice finer grid: certified overlap can only grow
    const auto finer = ip_overlap_search(
        rot, u, families::GeneratorSeq{std::vector<families::Elem>{hit->q}}, 1024,
        Rational{0});
    REQUIRE(finer.has_value());
    CHECK(finer->q == hit->q);
    CHECK(finer->overlap_lower >= hit->overlap_lower);
  }
}

TEST_CASE("budget limits are enforced") {
  const RotationSystem rot(CircleCoord::sqrt2_minus_one(64));
  const CircleBall u{CircleCoord::zero(), Dyadic::pow2_neg(3)};
  Budget tight;
  tight.max_window = 10;
  CHECK_THROWS_AS(return_times(rot, CircleCoord::zero(), u, 11, tight),
                  ResourceLimitError);
  CHECK_THROWS_AS(
      divergence_profile(rot, CircleCoord::zero(), CircleCoord::zero(),
                         Dyadic::half(), 20, 0, tight),
      ResourceLimitError);
}
