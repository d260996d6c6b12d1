#pragma once

#include <string>
#include <string_view>

#include "dynsense/analysis.hpp"
#include "dynsense/families.hpp"
#include "dynsense/systems.hpp"

namespace dynsense::text {

std::string u128_to_string(u128 v);
std::string u128_to_hex(u128 v, unsigned bits);  // zero-padded to bits/4 digits

/// "m/2^e", normalized; "0/2^0" for zero.
std::string format_dyadic(const Dyadic& d);

struct ParsedDyadic {
  Dyadic value;
  bool rounded = false;  // a decimal literal was rounded to `bits` fractional bits
};

/// Accepts "m/2^e", "p/q" with q a power of two, or a decimal in [0, 1]
/// (rounded to nearest at `bits` fractional bits, ties up).
ParsedDyadic parse_dyadic(std::string_view s, unsigned bits);

/// "e1,e2,...@N"; "@N" for the empty set.
std::string format_window_set(const families::WindowSet& s);
families::WindowSet parse_window_set(std::string_view s);

std::string format_witness(const families::FamilyWitness& w);

/// Hex fraction "0x..." of exactly bits/4 digits.
std::string format_circle_point(const systems::CircleCoord& c);

/// Hex fraction (up to bits/4 digits) or any dyadic literal.
systems::CircleCoord parse_circle_point(std::string_view s, unsigned bits);

/// Slash-separated hex fractions, e.g. "0x8000.../0x4000..." for (1/2, 1/4).
std::string format_torus_point(const systems::TorusPoint& p);
systems::TorusPoint parse_torus_point(std::string_view s, unsigned bits,
                                      int expected_dim = -1);

/// Expression grammar: omega | eta | periodic(01...) | flip(expr) |
/// shift(k, expr).
std::string format_symbolic_point(const systems::SymbolicPoint& p);
systems::SymbolicPoint parse_symbolic_point(std::string_view s);

/// "m/2^e" for located values, "<=m/2^e" for scan-limited upper bounds.
std::string format_metric_value(const systems::MetricValue& v);

std::string format_rational(const Rational& r);
Rational parse_rational(std::string_view s);

/// System literals: "rotation:<alpha>", "skew:<d>:<alpha>", "morse".
/// Alpha accepts dyadic literals or the named constant "sqrt2-1".
struct SystemSpec {
  enum class Kind { rotation, skew, morse } kind = Kind::rotation;
  systems::CircleCoord alpha;
  bool alpha_rounded = false;
  int dim = 1;
};

SystemSpec parse_system_literal(std::string_view s, unsigned bits);

/// Neighborhood literals: "ball:<point>:<radius>" (circle or torus point),
/// "cyl:<start>:<pattern>" for cylinder sets.
systems::CircleBall parse_circle_ball(std::string_view s, unsigned bits);
systems::TorusBall parse_torus_ball(std::string_view s, unsigned bits, int dim);
systems::CylinderSpec parse_cylinder(std::string_view s);

}  // namespace dynsense::text
