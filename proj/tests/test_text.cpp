#include <doctest.h>

#include "dynsense/text.hpp"

using namespace dynsense;
using namespace dynsense::text;

TEST_CASE("u128 decimal and hex rendering") {
  CHECK(u128_to_string(0) == "0");
  CHECK(u128_to_string(12345) == "12345");
  const u128 big = (u128{0x6a09e667f3bcc908ull} << 64) | 0xb2fb1366ea957d3eull;
  CHECK(u128_to_hex(big, 128) == "6a09e667f3bcc908b2fb1366ea957d3e");
  CHECK(u128_to_hex(0x8000000000000000ull, 64) == "8000000000000000");
}

TEST_CASE("dyadic literals") {
  CHECK(parse_dyadic("1/2^3", 64).value == Dyadic::pow2_neg(3));
  CHECK(parse_dyadic("1/8", 64).value == Dyadic::pow2_neg(3));
  CHECK(parse_dyadic("0.25", 64).value == Dyadic::pow2_neg(2));
  CHECK(!parse_dyadic("0.25", 64).rounded);
  CHECK(parse_dyadic("0", 64).value == Dyadic::zero());
  CHECK(parse_dyadic("1", 64).value == Dyadic::one());
  CHECK(parse_dyadic("1.0", 64).value == Dyadic::one());

  const auto tenth = parse_dyadic("0.1", 64);
  CHECK(tenth.rounded);
  // round(0.1 * 2^64) = 1844674407370955162, frozen from a big-integer
  // computation; one factor of two normalizes away
  CHECK(format_dyadic(tenth.value) == "922337203685477581/2^63");

  CHECK_THROWS_AS(parse_dyadic("1/3", 64), ParseError);
  CHECK_THROWS_AS(parse_dyadic("2.5", 64), ParseError);
  CHECK_THROWS_AS(parse_dyadic("", 64), ParseError);
  CHECK_THROWS_AS(parse_dyadic("abc", 64), ParseError);
}

TEST_CASE("dyadic formatting round trip") {
  for (const auto& d : {Dyadic::zero(), Dyadic::one(), Dyadic::half(),
                        Dyadic::pow2_neg(7), Dyadic::from_parts(5, 5)}) {
    CHECK(parse_dyadic(format_dyadic(d), 64).value == d);
  }
  CHECK(format_dyadic(Dyadic::zero()) == "0/2^0");
  CHECK(format_dyadic(Dyadic::from_parts(6, 4)) == "3/2^3");
}

TEST_CASE("window set literals") {
  const auto s = parse_window_set("1,2,3@8");
  CHECK(s.window_end() == 8);
  CHECK(s.elements() == std::vector<families::Elem>{1, 2, 3});
  CHECK(format_window_set(s) == "1,2,3@8");

  const auto empty = parse_window_set("@5");
  CHECK(empty.empty());
  CHECK(format_window_set(empty) == "@5");

  CHECK_THROWS_AS(parse_window_set("1,2,3"), ParseError);
  CHECK_THROWS_AS(parse_window_set("3,2@8"), ParseError);
  CHECK_THROWS_AS(parse_window_set("1,9@8"), ParseError);
  CHECK_THROWS_AS(parse_window_set("1,,3@8"), ParseError);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_window_set("1,x@8");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
    CHECK(std::string(e.what()).find("position 2") != std::string::npos);
  }
}

TEST_CASE("circle and torus point literals") {
  const auto half = parse_circle_point("0x8000000000000000", 64);
  CHECK(half.raw() == (u128{1} << 63));
  CHECK(format_circle_point(half) == "0x8000000000000000");
  // shorter hex literals scale up
  CHECK(parse_circle_point("0x8", 64).raw() == (u128{1} << 63));
  // decimal accepted too
  CHECK(parse_circle_point("0.5", 64) == half);

  const auto p = parse_torus_point("0x8000000000000000/0x4000000000000000", 64);
  CHECK(p.dim() == 2);
  CHECK(p.coord(0).raw() == (u128{1} << 63));
  CHECK(p.coord(1).raw() == (u128{1} << 62));
  CHECK(format_torus_point(p) == "0x8000000000000000/0x4000000000000000");
  CHECK_THROWS_AS(parse_torus_point("0x1/0x2", 64, 3), ParseError);
  CHECK_THROWS_AS(parse_circle_point("0xz", 64), ParseError);
  CHECK_THROWS_AS(parse_circle_point("0x12345678901234567", 64), ParseError);
}

TEST_CASE("symbolic point grammar") {
  const auto p = parse_symbolic_point("shift(-3, flip(omega))");
  CHECK(format_symbolic_point(p) == "shift(-3, flip(omega))");
  CHECK(systems::symbolic_eval(p, 3) == 1 - systems::morse_symbol(0));

  CHECK(format_symbolic_point(parse_symbolic_point("eta")) == "eta");
  CHECK(format_symbolic_point(parse_symbolic_point("periodic(0110)")) ==
        "periodic(0110)");
  CHECK(format_symbolic_point(parse_symbolic_point("shift(5, eta)")) ==
        "shift(5, eta)");

  CHECK_THROWS_AS(parse_symbolic_point("omega extra"), ParseError);
  CHECK_THROWS_AS(parse_symbolic_point("wibble"), ParseError);
  CHECK_THROWS_AS(parse_symbolic_point("periodic(012)"), ParseError);
  CHECK_THROWS_AS(parse_symbolic_point("shift(x, omega)"), ParseError);
  CHECK_THROWS_AS(parse_symbolic_point("flip(omega"), ParseError);
}

TEST_CASE("metric value rendering") {
  CHECK(format_metric_value(systems::MetricValue::exact_value(Dyadic::half())) ==
        "1/2^1");
  CHECK(format_metric_value(systems::MetricValue::at_most(Dyadic::pow2_neg(11))) ==
        "<=1/2^11");
}

TEST_CASE("witness rendering") {
  CHECK(format_witness(families::BlockWitness{64, 4032}) == "block:64+4032");
  CHECK(format_witness(families::FiniteIpWitness{families::GeneratorSeq{{1, 1}}}) ==
        "ip:[1,1]");
  CHECK(format_witness(families::FiniteDiffWitness{{0, 2, 5}}) == "diff:[0,2,5]");
  CHECK(format_witness(families::SyndeticWitness{2}) == "syndetic:2");
}

TEST_CASE("rational literals") {
  CHECK(parse_rational("3/10") == Rational{3, 10});
  CHECK(parse_rational("7") == Rational{7});
  CHECK(format_rational(Rational{3, 10}) == "3/10");
  CHECK_THROWS_AS(parse_rational("x/2"), ParseError);
}

TEST_CASE("system literals") {
  const auto rot = parse_system_literal("rotation:0.5", 64);
  CHECK(rot.kind == SystemSpec::Kind::rotation);
  CHECK(rot.alpha.raw() == (u128{1} << 63));

  const auto named = parse_system_literal("rotation:sqrt2-1", 64);
  CHECK(static_cast<std::uint64_t>(named.alpha.raw()) == 0x6a09e667f3bcc908ull);

  const auto skew = parse_system_literal("skew:3:sqrt2-1", 64);
  CHECK(skew.kind == SystemSpec::Kind::skew);
  CHECK(skew.dim == 3);

  CHECK(parse_system_literal("morse", 64).kind == SystemSpec::Kind::morse);

  CHECK_THROWS_AS(parse_system_literal("rotation", 64), ParseError);
  CHECK_THROWS_AS(parse_system_literal("skew:0:0.5", 64), ParseError);
  CHECK_THROWS_AS(parse_system_literal("banana:1", 64), ParseError);
}

TEST_CASE("neighborhood literals") {
  const auto ball = parse_circle_ball("ball:0:1/8", 64);
  CHECK(ball.center.raw() == 0);
  CHECK(ball.radius == Dyadic::pow2_neg(3));

  const auto tball = parse_torus_ball("ball:0x0/0x0:1/2^7", 64, 2);
  CHECK(tball.center.dim() == 2);
  CHECK(tball.radius == Dyadic::pow2_neg(7));

  const auto cyl = parse_cylinder("cyl:-2:01101");
  CHECK(cyl.start == -2);
  CHECK(cyl.pattern.size() == 5);

  CHECK_THROWS_AS(parse_circle_ball("ball:0:0", 64), ParseError);
  CHECK_THROWS_AS(parse_cylinder("cyl:0:012"), ParseError);
  CHECK_THROWS_AS(parse_circle_ball("box:0:1/8", 64), ParseError);
}
