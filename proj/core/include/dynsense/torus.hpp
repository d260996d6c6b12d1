#pragma once

#include <cstdint>
#include <vector>

#include "dynsense/circle.hpp"

namespace dynsense::systems {

/// A point of the d-torus: d fixed-point circle coordinates sharing one
/// precision.
class TorusPoint {
 public:
  explicit TorusPoint(std::vector<CircleCoord> coords);
  static TorusPoint zero(int dim, unsigned bits);

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  unsigned bits() const noexcept { return coords_.front().bits(); }
  const CircleCoord& coord(int i) const { return coords_.at(static_cast<std::size_t>(i)); }
  void set_coord(int i, const CircleCoord& c);
  const std::vector<CircleCoord>& coords() const noexcept { return coords_; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  std::vector<CircleCoord> coords_;
};

/// Sup metric: max over coordinates of the circle metric.
Dyadic torus_metric(const TorusPoint& x, const TorusPoint& y);

/// One step of the skew product: coordinate 0 gains alpha, coordinate j >= 1
/// gains the previous value of coordinate j-1.
TorusPoint skew_step(const TorusPoint& p, const CircleCoord& alpha);

/// Inverse of skew_step.
TorusPoint skew_step_back(const TorusPoint& p, const CircleCoord& alpha);

/// C(n, k) mod 2^bits by the additive Pascal-row recurrence; no division,
/// exact for every n. O(n * k) time, O(k) space.
u128 binomial_wrap(std::int64_t n, int k, unsigned bits, int max_degree = 8);

/// The whole row C(n, 0..kmax) mod 2^bits.
std::vector<u128> binomial_row_wrap(std::int64_t n, int kmax, unsigned bits,
                                    int max_degree = 8);

/// n-th iterate in closed form: coordinate j of the image is
/// sum_{i=0..j} C(n, j-i) * theta_i with theta_0 = alpha, all arithmetic
/// wrapping. Bit-identical to n applications of skew_step.
TorusPoint skew_iterate_closed(const TorusPoint& p, const CircleCoord& alpha,
                               std::int64_t n, int max_degree = 8);

}  // namespace dynsense::systems
