#pragma once

#include <cstdint>
#include <vector>

#include "dynsense/circle.hpp"
#include "dynsense/symbolic.hpp"
#include "dynsense/torus.hpp"

namespace dynsense::systems {

struct CircleBall {
  CircleCoord center;
  Dyadic radius;  // open ball, radius > 0
};

struct TorusBall {
  TorusPoint center;
  Dyadic radius;
};

/// Constrains the symbols on the contiguous coordinate range
/// [start, start + pattern.size()).
struct CylinderSpec {
  std::int64_t start = 0;
  std::vector<int> pattern;
};

namespace detail_sampling {

/// Raw lattice offsets covering [-r, r] with `per_axis` points (midpoint for
/// per_axis == 1). Callers filter by exact membership.
std::vector<u128> ball_offsets(const Dyadic& radius, unsigned bits, int per_axis);

}  // namespace detail_sampling

/// Rigid rotation of the circle by a fixed angle; the model equicontinuous
/// system.
class RotationSystem {
 public:
  using Point = CircleCoord;
  using Neighborhood = CircleBall;

  explicit RotationSystem(const CircleCoord& alpha) : alpha_(alpha) {}

  const CircleCoord& alpha() const noexcept { return alpha_; }
  unsigned bits() const noexcept { return alpha_.bits(); }

  Point apply(const Point& x, std::int64_t n) const {
    return rotation_iterate(x, alpha_, n);
  }

  MetricValue distance(const Point& a, const Point& b) const {
    return MetricValue::exact_value(circle_metric(a, b));
  }

  bool contains(const Neighborhood& u, const Point& p) const {
    return circle_metric(u.center, p) < u.radius;
  }

  std::vector<Point> sample(const Neighborhood& u, int per_axis,
                            std::size_t max_samples = 65536) const;

  class Cursor {
   public:
    Cursor(Point start, CircleCoord step) : cur_(start), step_(step) {}
    const Point& value() const noexcept { return cur_; }
    void advance() { cur_ = cur_.plus(step_); }

   private:
    Point cur_;
    CircleCoord step_;
  };

  Cursor cursor(const Point& start, int direction = 1) const {
    return Cursor(start, direction >= 0 ? alpha_ : alpha_.scaled(-1));
  }

 private:
  CircleCoord alpha_;
};

/// The torus skew product: coordinate 0 rotates, each later coordinate is
/// driven by the one before it.
class SkewSystem {
 public:
  using Point = TorusPoint;
  using Neighborhood = TorusBall;

  SkewSystem(const CircleCoord& alpha, int dim, int max_degree = 8)
      : alpha_(alpha), dim_(dim), max_degree_(max_degree) {
    if (dim < 1) throw UsageError("skew dimension must be >= 1");
    if (dim > max_degree)
      throw ResourceLimitError("skew dimension exceeds binomial degree cap");
  }

  const CircleCoord& alpha() const noexcept { return alpha_; }
  int dim() const noexcept { return dim_; }
  unsigned bits() const noexcept { return alpha_.bits(); }

  Point apply(const Point& x, std::int64_t n) const {
    check_point(x);
    if (n >= 0) return skew_iterate_closed(x, alpha_, n, max_degree_);
    Point p = x;
    for (std::int64_t i = 0; i > n; --i) p = skew_step_back(p, alpha_);
    return p;
  }

  MetricValue distance(const Point& a, const Point& b) const {
    return MetricValue::exact_value(torus_metric(a, b));
  }

  bool contains(const Neighborhood& u, const Point& p) const {
    return torus_metric(u.center, p) < u.radius;
  }

  std::vector<Point> sample(const Neighborhood& u, int per_axis,
                            std::size_t max_samples = 65536) const;

  class Cursor {
   public:
    Cursor(Point start, CircleCoord alpha, int direction)
        : cur_(std::move(start)), alpha_(alpha), forward_(direction >= 0) {}
    const Point& value() const noexcept { return cur_; }
    void advance() {
      cur_ = forward_ ? skew_step(cur_, alpha_) : skew_step_back(cur_, alpha_);
    }

   private:
    Point cur_;
    CircleCoord alpha_;
    bool forward_;
  };

  Cursor cursor(const Point& start, int direction = 1) const {
    check_point(start);
    return Cursor(start, alpha_, direction);
  }

 private:
  void check_point(const Point& p) const {
    if (p.dim() != dim_) throw UsageError("point dimension mismatch");
    p.coord(0).check_same_bits(alpha_);
  }

  CircleCoord alpha_;
  int dim_;
  int max_degree_;
};

/// The shift acting on rule-defined two-sided binary sequences. Distances
/// are scanned out to a configurable radius and reported as exact values or
/// upper bounds.
class MorseShift {
 public:
  using Point = SymbolicPoint;
  using Neighborhood = CylinderSpec;

  explicit MorseShift(std::int64_t scan_radius = 64, int catalog_range = 64)
      : scan_radius_(scan_radius), catalog_range_(catalog_range) {}

  std::int64_t scan_radius() const noexcept { return scan_radius_; }

  Point apply(const Point& x, std::int64_t n) const {
    return n == 0 ? x : x.shifted(n);
  }

  MetricValue distance(const Point& a, const Point& b) const {
    return symbolic_metric(a, b, scan_radius_);
  }

  bool contains(const Neighborhood& u, const Point& p) const {
    for (std::size_t i = 0; i < u.pattern.size(); ++i)
      if (symbolic_eval(p, u.start + static_cast<std::int64_t>(i)) != u.pattern[i])
        return false;
    return true;
  }

  /// Exact enumeration against a fixed catalog of rule points: the four base
  /// points and their shifts within [-catalog_range, catalog_range].
  std::vector<Point> sample(const Neighborhood& u, int /*per_axis*/,
                            std::size_t max_samples = 65536) const;

  class Cursor {
   public:
    Cursor(Point base, int direction)
        : base_(std::move(base)), step_(direction >= 0 ? 1 : -1) {}
    Point value() const { return offset_ == 0 ? base_ : base_.shifted(offset_); }
    void advance() noexcept { offset_ += step_; }

   private:
    Point base_;
    std::int64_t offset_ = 0;
    std::int64_t step_;
  };

  Cursor cursor(const Point& start, int direction = 1) const {
    return Cursor(start, direction);
  }

 private:
  std::int64_t scan_radius_;
  int catalog_range_;
};

}  // namespace dynsense::systems
