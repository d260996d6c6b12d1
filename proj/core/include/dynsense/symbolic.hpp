#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dynsense/exact.hpp"

namespace dynsense::systems {

/// Thue-Morse symbol: for n >= 0 the parity of set bits of n, which is the
/// unique solution of m(0) = 0, m(2n) = m(n), m(2n+1) = 1 - m(n). Negative
/// indices follow the two-sided extension m(-n) = m(n-1).
int morse_symbol(std::int64_t n);

/// A rule-defined two-sided binary sequence, evaluated lazily. Immutable;
/// cheap to copy and share between threads.
class SymbolicPoint {
 public:
  enum class Kind { morse_omega, eta, periodic, flip, shift };

  static SymbolicPoint morse_omega();
  /// eta agrees with the Morse sequence on n >= 0 and with its flip on n < 0.
  static SymbolicPoint eta();
  static SymbolicPoint periodic(const std::string& zeros_and_ones);

  SymbolicPoint flipped() const;
  SymbolicPoint shifted(std::int64_t offset) const;

  Kind kind() const noexcept { return node_->kind; }
  int depth() const noexcept { return node_->depth; }
  std::int64_t shift_offset() const;   // kind() == shift
  SymbolicPoint inner() const;         // kind() in {flip, shift}
  const std::vector<int>& word() const;  // kind() == periodic

 private:
  struct Node {
    Kind kind;
    std::vector<int> word;
    std::int64_t offset = 0;
    std::shared_ptr<const Node> inner;
    int depth = 1;
  };

  explicit SymbolicPoint(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;

  friend int symbolic_eval(const SymbolicPoint&, std::int64_t, int);
};

/// Value of the sequence at coordinate i.
int symbolic_eval(const SymbolicPoint& p, std::int64_t i, int depth_limit = 256);

/// Either an exactly located value or only an upper bound. A finite scan can
/// certify a difference, never equality of two rule-defined points.
struct MetricValue {
  Dyadic bound;
  bool exact = false;

  static MetricValue exact_value(Dyadic d) { return MetricValue{std::move(d), true}; }
  static MetricValue at_most(Dyadic d) { return MetricValue{std::move(d), false}; }

  bool certified_above(const Dyadic& delta) const { return exact && delta < bound; }
  bool certified_not_above(const Dyadic& delta) const { return bound <= delta; }

  friend bool operator==(const MetricValue&, const MetricValue&) = default;
};

/// d(p, q) = 2^-m where m = min{|i| : p(i) != q(i)}, scanning
/// i = 0, 1, -1, ..., R, -R. Exact{2^-m} at the first difference,
/// AtMost{2^-(R+1)} when none is found within the radius.
MetricValue symbolic_metric(const SymbolicPoint& p, const SymbolicPoint& q,
                            std::int64_t radius, int depth_limit = 256);

/// Dyadic-residue coordinates a_m = k mod 2^m, m = 1..levels, for an explicit
/// shift by k of one of the four base points (Morse, its flip, eta, its
/// flip), whose own coordinate is 0. Other points are unsupported.
std::vector<std::int64_t> odometer_coordinate(const SymbolicPoint& p, int levels);

}  // namespace dynsense::systems
