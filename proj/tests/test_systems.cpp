#include <doctest.h>

#include "dynsense/rng.hpp"
#include "dynsense/systems.hpp"

using namespace dynsense;
using namespace dynsense::systems;

namespace {

CircleCoord half(unsigned bits = 64) { return CircleCoord(u128{1} << (bits - 1), bits); }
CircleCoord quarter(unsigned bits = 64) {
  return CircleCoord(u128{1} << (bits - 2), bits);
}

TorusPoint random_point(Rng& rng, int dim, unsigned bits = 64) {
  std::vector<CircleCoord> c;
  for (int i = 0; i < dim; ++i) c.emplace_back(rng.next_u128(), bits);
  return TorusPoint(std::move(c));
}

}  // namespace

TEST_CASE("rotation iterate basics") {
  const CircleCoord zero = CircleCoord::zero();
  CHECK(rotation_iterate(zero, half(), 3) == half());
  const CircleCoord x(12345, 64);
  CHECK(rotation_iterate(x, half(), 0) == x);
  CHECK(rotation_iterate(x, half(), -2) == x);
  CHECK(rotation_iterate(x, half(), -1) == x.plus(half()));
}

TEST_CASE("rotation iterate equals repeated addition over a long orbit") {
  const CircleCoord alpha = CircleCoord::sqrt2_minus_one(64);
  CircleCoord acc = CircleCoord::zero();
  for (int n = 0; n < 1'000'000; ++n) acc = acc.plus(alpha);
  CHECK(rotation_iterate(CircleCoord::zero(), alpha, 1'000'000) == acc);
}

TEST_CASE("sqrt2-1 truncations match the frozen constants") {
  CHECK(static_cast<std::uint64_t>(CircleCoord::sqrt2_minus_one(32).raw()) ==
        0x6a09e667u);
  CHECK(static_cast<std::uint64_t>(CircleCoord::sqrt2_minus_one(64).raw()) ==
        0x6a09e667f3bcc908ull);
  const u128 w128 = CircleCoord::sqrt2_minus_one(128).raw();
  CHECK(static_cast<std::uint64_t>(w128 >> 64) == 0x6a09e667f3bcc908ull);
  CHECK(static_cast<std::uint64_t>(w128) == 0xb2fb1366ea957d3eull);
}

TEST_CASE("circle metric values and wrap-around") {
  const CircleCoord zero = CircleCoord::zero();
  CHECK(circle_metric(zero, zero) == Dyadic::zero());
  CHECK(circle_metric(zero, half()) == Dyadic::half());
  const CircleCoord three_quarters(3 * (u128{1} << 62), 64);
  CHECK(circle_metric(zero, three_quarters) == Dyadic::pow2_neg(2));
  CHECK_THROWS_AS(circle_metric(zero, CircleCoord::zero(32)), UsageError);
}

TEST_CASE("rotation is an exact isometry") {
  Rng rng(41);
  const CircleCoord alpha = CircleCoord::sqrt2_minus_one(64);
  for (int t = 0; t < 500; ++t) {
    const CircleCoord x(rng.next_u128(), 64);
    const CircleCoord y(rng.next_u128(), 64);
    const auto n = static_cast<std::int64_t>(rng.below(1u << 20)) - (1 << 19);
    CHECK(circle_metric(rotation_iterate(x, alpha, n), rotation_iterate(y, alpha, n)) ==
          circle_metric(x, y));
  }
}

TEST_CASE("skew step follows the driving rule") {
  const CircleCoord a = quarter();
  TorusPoint p = TorusPoint::zero(2, 64);
  p = skew_step(p, a);
  CHECK(p.coord(0) == quarter());
  CHECK(p.coord(1) == CircleCoord::zero());
  p = skew_step(p, a);
  CHECK(p.coord(0) == half());
  CHECK(p.coord(1) == quarter());
}

TEST_CASE("one-dimensional skew degenerates to the rotation") {
  Rng rng(9);
  const CircleCoord a(rng.next_u128(), 64);
  const TorusPoint p(std::vector<CircleCoord>{CircleCoord(rng.next_u128(), 64)});
  CHECK(skew_step(p, a).coord(0) == p.coord(0).plus(a));
}

TEST_CASE("skew step back inverts skew step") {
  Rng rng(13);
  const CircleCoord a(rng.next_u128(), 64);
  for (int t = 0; t < 100; ++t) {
    const TorusPoint p = random_point(rng, 4);
    CHECK(skew_step_back(skew_step(p, a), a) == p);
    CHECK(skew_step(skew_step_back(p, a), a) == p);
  }
}

TEST_CASE("binomial row by wrapping Pascal recurrence") {
  CHECK(binomial_wrap(5, 2, 64) == 10);
  CHECK(binomial_wrap(0, 0, 64) == 1);
  for (std::int64_t n : {0, 1, 7, 100}) CHECK(binomial_wrap(n, 0, 64) == 1);
  CHECK(binomial_wrap(3, 3, 64) == 1);
  CHECK(binomial_wrap(2, 3, 64) == 0);  // k > n
  // against the multiplicative big-integer route, reduced mod 2^64
  const u128 expect = static_cast<u128>(1'000'000) * 999'999 * 999'998 / 6;
  CHECK(binomial_wrap(1'000'000, 3, 64) ==
        (expect & ((u128{1} << 64) - 1)));
  // wrap really happens at small precision
  CHECK(binomial_wrap(10, 5, 8) == (252 & 0xff));
  CHECK_THROWS_AS(binomial_wrap(10, 9, 64), ResourceLimitError);
  CHECK_THROWS_AS(binomial_wrap(-1, 2, 64), UsageError);
}

TEST_CASE("closed-form iterate: identity and the quadratic coordinate") {
  Rng rng(29);
  const CircleCoord alpha(rng.next_u128(), 64);
  const TorusPoint p = random_point(rng, 2);
  CHECK(skew_iterate_closed(p, alpha, 0) == p);

  // coordinate 1 after n steps is theta1 + n*theta0 + C(n,2)*alpha
  for (const std::int64_t n : {1, 2, 3, 17, 1000}) {
    const TorusPoint q = skew_iterate_closed(p, alpha, n);
    const CircleCoord expect =
        p.coord(1).plus(p.coord(0).scaled(n)).plus(
            CircleCoord(binomial_wrap(n, 2, 64) * alpha.raw(), 64));
    CHECK(q.coord(1) == expect);
  }
}

TEST_CASE("closed form is bit-identical to stepping") {
  Rng rng(31);
  for (const int dim : {2, 3, 5}) {
    const CircleCoord alpha(rng.next_u128(), 64);
    TorusPoint p = random_point(rng, dim);
    TorusPoint stepped = p;
    for (std::int64_t n = 0; n <= 4097; ++n) {
      if (n == 0 || n == 1 || n == 64 || n == 4097)
        CHECK(skew_iterate_closed(p, alpha, n) == stepped);
      stepped = skew_step(stepped, alpha);
    }
  }
}

TEST_CASE("closed form at 128-bit precision") {
  Rng rng(37);
  const CircleCoord alpha(rng.next_u128(), 128);
  std::vector<CircleCoord> c;
  for (int i = 0; i < 3; ++i) c.emplace_back(rng.next_u128(), 128);
  const TorusPoint p(std::move(c));
  TorusPoint stepped = p;
  for (int n = 0; n < 1000; ++n) stepped = skew_step(stepped, alpha);
  CHECK(skew_iterate_closed(p, alpha, 1000) == stepped);
}

TEST_CASE("torus metric is the coordinate maximum") {
  const TorusPoint zero = TorusPoint::zero(2, 64);
  CHECK(torus_metric(zero, zero) == Dyadic::zero());
  TorusPoint q = zero;
  q.set_coord(1, quarter());
  CHECK(torus_metric(zero, q) == Dyadic::pow2_neg(2));
  TorusPoint r = zero;
  r.set_coord(0, half());
  r.set_coord(1, quarter());
  CHECK(torus_metric(zero, r) == Dyadic::half());
  CHECK_THROWS_AS(torus_metric(zero, TorusPoint::zero(3, 64)), UsageError);
}

TEST_CASE("torus metric triangle inequality on random triples") {
  Rng rng(43);
  for (int t = 0; t < 500; ++t) {
    const TorusPoint a = random_point(rng, 3);
    const TorusPoint b = random_point(rng, 3);
    const TorusPoint c = random_point(rng, 3);
    CHECK(torus_metric(a, c) <= torus_metric(a, b).plus(torus_metric(b, c)));
  }
}

TEST_CASE("system wrappers: apply, contains, sampling") {
  const RotationSystem rot(half());
  CHECK(rot.apply(CircleCoord::zero(), 3) == half());
  const CircleBall u{CircleCoord::zero(), Dyadic::pow2_neg(3)};
  CHECK(rot.contains(u, CircleCoord::zero()));
  CHECK(!rot.contains(u, half()));
  const auto samples = rot.sample(u, 9);
  CHECK(!samples.empty());
  for (const auto& s : samples) CHECK(rot.contains(u, s));

  const SkewSystem sk(quarter(), 2);
  const TorusBall tu{TorusPoint::zero(2, 64), Dyadic::pow2_neg(4)};
  const auto ts = sk.sample(tu, 5);
  CHECK(ts.size() > 1);
  for (const auto& s : ts) CHECK(sk.contains(tu, s));
  CHECK_THROWS_AS(sk.sample(tu, 5, 3), ResourceLimitError);

  // skew apply forward matches cursor stepping
  auto cur = sk.cursor(ts.front());
  for (int i = 0; i < 10; ++i) cur.advance();
  CHECK(sk.apply(ts.front(), 10) == cur.value());
  // backward apply inverts forward
  CHECK(sk.apply(sk.apply(ts.front(), 7), -7) == ts.front());
}
