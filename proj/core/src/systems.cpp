#include "dynsense/systems.hpp"

namespace dynsense::systems {

namespace detail_sampling {

std::vector<u128> ball_offsets(const Dyadic& radius, unsigned bits, int per_axis) {
  if (radius.is_zero()) throw UsageError("ball radius must be positive");
  if (per_axis < 1) throw UsageError("grid resolution must be >= 1");

  // Radius in raw units, floored when it is finer than the precision.
  u128 r_raw;
  if (radius.exponent() <= bits) {
    const unsigned s = bits - radius.exponent();
    r_raw = s >= 128 ? 0 : (radius.numerator() << s);
  } else {
    const unsigned s = radius.exponent() - bits;
    r_raw = s >= 128 ? 0 : (radius.numerator() >> s);
  }

  std::vector<u128> offsets;
  if (per_axis == 1 || r_raw == 0) {
    offsets.push_back(0);
    return offsets;
  }
  const u128 half_step = r_raw / static_cast<unsigned>(per_axis - 1);
  for (int t = 0; t < per_axis; ++t) {
    const u128 o = (0 - r_raw) + 2 * half_step * static_cast<unsigned>(t);
    if (offsets.empty() || offsets.back() != o) offsets.push_back(o);
  }
  return offsets;
}

}  // namespace detail_sampling

std::vector<RotationSystem::Point> RotationSystem::sample(
    const Neighborhood& u, int per_axis, std::size_t max_samples) const {
  const auto offsets = detail_sampling::ball_offsets(u.radius, bits(), per_axis);
  std::vector<Point> out;
  for (const u128 o : offsets) {
    const Point p = u.center.plus(CircleCoord(o, bits()));
    if (contains(u, p)) out.push_back(p);
  }
  if (out.size() > max_samples)
    throw ResourceLimitError("neighborhood sample budget exceeded");
  return out;
}

std::vector<SkewSystem::Point> SkewSystem::sample(const Neighborhood& u,
                                                  int per_axis,
                                                  std::size_t max_samples) const {
  check_point(u.center);
  const auto offsets = detail_sampling::ball_offsets(u.radius, bits(), per_axis);
  const std::size_t k = offsets.size();
  std::size_t total = 1;
  for (int j = 0; j < dim_; ++j) {
    total *= k;
    if (total > max_samples)
      throw ResourceLimitError("neighborhood sample budget exceeded");
  }

  std::vector<Point> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim_), 0);
  for (std::size_t count = 0; count < total; ++count) {
    std::vector<CircleCoord> coords;
    coords.reserve(static_cast<std::size_t>(dim_));
    for (int j = 0; j < dim_; ++j)
      coords.push_back(u.center.coord(j).plus(
          CircleCoord(offsets[idx[static_cast<std::size_t>(j)]], bits())));
    Point p{std::move(coords)};
    if (contains(u, p)) out.push_back(std::move(p));
    for (int j = dim_ - 1; j >= 0; --j) {
      auto& i = idx[static_cast<std::size_t>(j)];
      if (++i < k) break;
      i = 0;
    }
  }
  return out;
}

std::vector<MorseShift::Point> MorseShift::sample(const Neighborhood& u,
                                                  int /*per_axis*/,
                                                  std::size_t max_samples) const {
  const std::vector<Point> bases = {
      SymbolicPoint::morse_omega(), SymbolicPoint::morse_omega().flipped(),
      SymbolicPoint::eta(), SymbolicPoint::eta().flipped()};
  std::vector<Point> out;
  for (std::int64_t k = -catalog_range_; k <= catalog_range_; ++k) {
    for (const auto& b : bases) {
      Point p = k == 0 ? b : b.shifted(k);
      if (contains(u, p)) {
        out.push_back(std::move(p));
        if (out.size() > max_samples)
          throw ResourceLimitError("cylinder sample budget exceeded");
      }
    }
  }
  return out;
}

}  // namespace dynsense::systems
