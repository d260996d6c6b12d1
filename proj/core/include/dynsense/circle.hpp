#pragma once

#include <cstdint>

#include "dynsense/exact.hpp"

namespace dynsense::systems {

/// A W-bit fixed-point circle coordinate: raw / 2^W in [0, 1). All
/// arithmetic wraps modulo 2^W, so addition and integer scaling are exact
/// modulo 1. W up to 128.
class CircleCoord {
 public:
  CircleCoord() = default;

  CircleCoord(u128 raw, unsigned bits) : bits_(bits) {
    if (bits < 1 || bits > 128) throw UsageError("precision bits must be in [1, 128]");
    raw_ = raw & mask();
  }

  static CircleCoord zero(unsigned bits = 64) { return CircleCoord(0, bits); }

  /// Exact conversion; the dyadic must be representable at this precision.
  static CircleCoord from_dyadic(const Dyadic& d, unsigned bits) {
    if (d.exponent() > bits)
      throw UsageError("dyadic value finer than the coordinate precision");
    if (d.is_one()) return CircleCoord(0, bits);  // 1 wraps to 0 on the circle
    const unsigned shift = bits - d.exponent();
    return CircleCoord(shift >= 128 ? 0 : (d.numerator() << shift), bits);
  }

  /// W-bit truncation of sqrt(2) - 1.
  static CircleCoord sqrt2_minus_one(unsigned bits = 64);

  u128 raw() const noexcept { return raw_; }
  unsigned bits() const noexcept { return bits_; }

  u128 mask() const noexcept {
    return bits_ == 128 ? ~u128{0} : ((u128{1} << bits_) - 1);
  }

  CircleCoord plus(const CircleCoord& o) const {
    check_same_bits(o);
    return CircleCoord((raw_ + o.raw_) & mask(), bits_);
  }

  CircleCoord minus(const CircleCoord& o) const {
    check_same_bits(o);
    return CircleCoord((raw_ - o.raw_) & mask(), bits_);
  }

  /// n * x modulo 1, wrapping multiply, n may be negative.
  CircleCoord scaled(std::int64_t n) const {
    const std::uint64_t mag =
        n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    u128 prod = (raw_ * static_cast<u128>(mag)) & mask();
    if (n < 0) prod = (0 - prod) & mask();
    return CircleCoord(prod, bits_);
  }

  Dyadic to_dyadic() const { return Dyadic::from_parts(raw_, bits_); }

  friend bool operator==(const CircleCoord& a, const CircleCoord& b) {
    return a.bits_ == b.bits_ && a.raw_ == b.raw_;
  }

  void check_same_bits(const CircleCoord& o) const {
    if (bits_ != o.bits_) throw UsageError("mixed coordinate precisions");
  }

 private:
  u128 raw_ = 0;
  unsigned bits_ = 64;
};

/// min(|a - b|, 1 - |a - b|) as an exact dyadic in [0, 1/2].
inline Dyadic circle_metric(const CircleCoord& a, const CircleCoord& b) {
  a.check_same_bits(b);
  const u128 d = (a.raw() - b.raw()) & a.mask();
  const u128 e = (b.raw() - a.raw()) & a.mask();
  return Dyadic::from_parts(d < e ? d : e, a.bits());
}

/// x + n * alpha, exact modulo 1.
inline CircleCoord rotation_iterate(const CircleCoord& x, const CircleCoord& alpha,
                                    std::int64_t n) {
  x.check_same_bits(alpha);
  return x.plus(alpha.scaled(n));
}

}  // namespace dynsense::systems
