#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "dynsense/errors.hpp"

namespace dynsense {

using u128 = unsigned __int128;
using i128 = __int128;

namespace detail {

inline int bit_width_u128(u128 v) noexcept {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  return hi ? 64 + std::bit_width(hi) : std::bit_width(lo);
}

inline int countr_zero_u128(u128 v) noexcept {
  const auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return std::countr_zero(lo);
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  return 64 + std::countr_zero(hi);
}

inline int popcount_u128(u128 v) noexcept {
  return std::popcount(static_cast<std::uint64_t>(v)) +
         std::popcount(static_cast<std::uint64_t>(v >> 64));
}

/// 256-bit unsigned helper for exact cross-multiplied comparisons.
/// Only the handful of operations the dyadic/measure code needs.
struct U256 {
  u128 lo = 0;
  u128 hi = 0;

  static U256 from(u128 v) noexcept { return U256{v, 0}; }

  static U256 mul(u128 a, u128 b) noexcept {
    const std::uint64_t a0 = static_cast<std::uint64_t>(a);
    const std::uint64_t a1 = static_cast<std::uint64_t>(a >> 64);
    const std::uint64_t b0 = static_cast<std::uint64_t>(b);
    const std::uint64_t b1 = static_cast<std::uint64_t>(b >> 64);
    const u128 p00 = static_cast<u128>(a0) * b0;
    const u128 p01 = static_cast<u128>(a0) * b1;
    const u128 p10 = static_cast<u128>(a1) * b0;
    const u128 p11 = static_cast<u128>(a1) * b1;
    U256 r;
    r.lo = p00;
    r.hi = p11;
    // add p01 << 64 and p10 << 64 with carry tracking
    for (const u128 mid : {p01, p10}) {
      const u128 add_lo = mid << 64;
      const u128 old = r.lo;
      r.lo += add_lo;
      r.hi += (mid >> 64) + (r.lo < old ? 1 : 0);
    }
    return r;
  }

  U256 shl(unsigned s) const {
    if (s == 0) return *this;
    if (s >= 256) throw ResourceLimitError("256-bit shift overflow");
    U256 r;
    if (s >= 128) {
      const unsigned t = s - 128;
      r.lo = 0;
      r.hi = (t == 0) ? lo : (lo << t);
      if (t != 0 && (lo >> (128 - t)) != 0)
        throw ResourceLimitError("256-bit shift overflow");
      if (hi != 0) throw ResourceLimitError("256-bit shift overflow");
    } else {
      r.lo = lo << s;
      r.hi = (hi << s) | (lo >> (128 - s));
      if ((hi >> (128 - s)) != 0)
        throw ResourceLimitError("256-bit shift overflow");
    }
    return r;
  }

  U256 shr(unsigned s) const noexcept {
    if (s == 0) return *this;
    U256 r;
    if (s >= 256) return r;
    if (s >= 128) {
      const unsigned t = s - 128;
      r.lo = (t == 0) ? hi : (hi >> t);
      r.hi = 0;
    } else {
      r.lo = (lo >> s) | (hi << (128 - s));
      r.hi = hi >> s;
    }
    return r;
  }

  U256 add(const U256& o) const noexcept {
    U256 r;
    r.lo = lo + o.lo;
    r.hi = hi + o.hi + (r.lo < lo ? 1 : 0);
    return r;
  }

  U256 sub(const U256& o) const noexcept {  // assumes *this >= o
    U256 r;
    r.lo = lo - o.lo;
    r.hi = hi - o.hi - (lo < o.lo ? 1 : 0);
    return r;
  }

  int compare(const U256& o) const noexcept {
    if (hi != o.hi) return hi < o.hi ? -1 : 1;
    if (lo != o.lo) return lo < o.lo ? -1 : 1;
    return 0;
  }

  bool is_zero() const noexcept { return lo == 0 && hi == 0; }

  int bit_width() const noexcept {
    return hi ? 128 + bit_width_u128(hi) : bit_width_u128(lo);
  }

  bool fits_u128() const noexcept { return hi == 0; }
};

/// floor(sqrt(n)) for a 256-bit radicand, by the classic two-bit
/// digit-by-digit method. Result always fits in 128 bits.
inline u128 isqrt_u256(U256 n) noexcept {
  U256 rem{0, 0};
  u128 root = 0;
  for (int shift = 254; shift >= 0; shift -= 2) {
    rem = rem.shl(2).add(U256{(n.shr(static_cast<unsigned>(shift)).lo) & 3, 0});
    const U256 trial = U256::from(root).shl(2).add(U256::from(1));
    root <<= 1;
    if (trial.compare(rem) <= 0) {
      rem = rem.sub(trial);
      root |= 1;
    }
  }
  return root;
}

}  // namespace detail

/// Exact dyadic rational in [0, 1], stored as num / 2^exp with num odd
/// (or num == 0, exp == 0). Exponents are not bounded by a machine word,
/// so symbolic-metric values like 2^-4096 are representable.
class Dyadic {
 public:
  Dyadic() = default;

  static Dyadic from_parts(u128 num, std::uint32_t exp) {
    Dyadic d;
    d.num_ = num;
    d.exp_ = exp;
    d.normalize();
    if (d.exp_ < 128 && d.num_ > (u128{1} << d.exp_))
      throw UsageError("dyadic value must lie in [0, 1]");
    return d;
  }

  static Dyadic zero() noexcept { return Dyadic{}; }
  static Dyadic one() { return from_parts(1, 0); }
  static Dyadic half() { return from_parts(1, 1); }

  /// 2^-m
  static Dyadic pow2_neg(std::uint32_t m) {
    Dyadic d;
    d.num_ = 1;
    d.exp_ = m;
    return d;
  }

  u128 numerator() const noexcept { return num_; }
  std::uint32_t exponent() const noexcept { return exp_; }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_one() const noexcept { return num_ == 1 && exp_ == 0; }

  Dyadic halved() const {
    if (num_ == 0) return *this;
    Dyadic d;
    d.num_ = num_;
    d.exp_ = exp_ + 1;
    return d;
  }

  static int compare(const Dyadic& a, const Dyadic& b) noexcept {
    return compare_scaled(a, 1, b, 1);
  }

  /// Exact sign of a*am - b*bm, with small integer multipliers.
  /// Correct for arbitrarily large exponents.
  static int compare_scaled(const Dyadic& a, std::uint64_t am, const Dyadic& b,
                            std::uint64_t bm) noexcept {
    const detail::U256 an = detail::U256::mul(a.num_, am);
    const detail::U256 bn = detail::U256::mul(b.num_, bm);
    if (an.is_zero() || bn.is_zero()) {
      if (an.is_zero() && bn.is_zero()) return 0;
      return an.is_zero() ? -1 : 1;
    }
    const std::int64_t ma =
        static_cast<std::int64_t>(an.bit_width()) - static_cast<std::int64_t>(a.exp_);
    const std::int64_t mb =
        static_cast<std::int64_t>(bn.bit_width()) - static_cast<std::int64_t>(b.exp_);
    if (ma != mb) return ma < mb ? -1 : 1;
    // Equal binary magnitude: align numerators (shift bounded by bit widths).
    const int wa = an.bit_width();
    const int wb = bn.bit_width();
    detail::U256 A = an;
    detail::U256 B = bn;
    if (wa < wb)
      A = A.shl(static_cast<unsigned>(wb - wa));
    else if (wb < wa)
      B = B.shl(static_cast<unsigned>(wa - wb));
    return A.compare(B);
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) noexcept {
    return a.num_ == b.num_ && a.exp_ == b.exp_;
  }
  friend bool operator<(const Dyadic& a, const Dyadic& b) noexcept {
    return compare(a, b) < 0;
  }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) noexcept {
    return compare(a, b) <= 0;
  }
  friend bool operator>(const Dyadic& a, const Dyadic& b) noexcept {
    return compare(a, b) > 0;
  }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) noexcept {
    return compare(a, b) >= 0;
  }

  /// Exact sum. Throws if the result is not representable with a 128-bit
  /// numerator or exceeds 1; metric sums (each term <= 1/2) never do.
  Dyadic plus(const Dyadic& o) const {
    if (num_ == 0) return o;
    if (o.num_ == 0) return *this;
    const std::uint32_t e = exp_ > o.exp_ ? exp_ : o.exp_;
    const std::uint32_t sa = e - exp_;
    const std::uint32_t sb = e - o.exp_;
    if (sa > 200 || sb > 200)
      throw ResourceLimitError("dyadic sum not exactly representable");
    detail::U256 s =
        detail::U256::from(num_).shl(sa).add(detail::U256::from(o.num_).shl(sb));
    std::uint32_t exp = e;
    while ((s.lo & 1) == 0 && exp > 0 && !s.is_zero()) {
      s = s.shr(1);
      --exp;
    }
    if (!s.fits_u128())
      throw ResourceLimitError("dyadic sum not exactly representable");
    return from_parts(s.lo, exp);
  }

  double approx() const noexcept {
    if (num_ == 0) return 0.0;
    double v = static_cast<double>(static_cast<std::uint64_t>(num_ >> 64)) *
                   18446744073709551616.0 +
               static_cast<double>(static_cast<std::uint64_t>(num_));
    int e = static_cast<int>(exp_);
    while (e > 0) {
      const int step = e > 512 ? 512 : e;
      v /= std::pow(2.0, step);
      e -= step;
    }
    return v;
  }

 private:
  void normalize() noexcept {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    const int tz = detail::countr_zero_u128(num_);
    const int strip = tz < static_cast<int>(exp_) ? tz : static_cast<int>(exp_);
    num_ >>= strip;
    exp_ -= static_cast<std::uint32_t>(strip);
  }

  u128 num_ = 0;
  std::uint32_t exp_ = 0;
};

/// Exact rational over int64 with overflow-checked arithmetic.
/// Intended for finite weighted cell spaces and thresholds, not for
/// unbounded computation; overflow throws instead of degrading.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw UsageError("rational with zero denominator");
    reduce();
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const i128 n = static_cast<i128>(a.num_) * b.den_ +
                   static_cast<i128>(b.num_) * a.den_;
    const i128 d = static_cast<i128>(a.den_) * b.den_;
    return make_checked(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    const i128 n = static_cast<i128>(a.num_) * b.den_ -
                   static_cast<i128>(b.num_) * a.den_;
    const i128 d = static_cast<i128>(a.den_) * b.den_;
    return make_checked(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    const i128 n = static_cast<i128>(a.num_) * b.num_;
    const i128 d = static_cast<i128>(a.den_) * b.den_;
    return make_checked(n, d);
  }

  Rational pow(int k) const {
    if (k < 0) throw UsageError("negative rational power");
    Rational r{1};
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  static int compare(const Rational& a, const Rational& b) noexcept {
    const i128 l = static_cast<i128>(a.num_) * b.den_;
    const i128 r = static_cast<i128>(b.num_) * a.den_;
    if (l != r) return l < r ? -1 : 1;
    return 0;
  }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) noexcept {
    return compare(a, b) < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) noexcept {
    return compare(a, b) <= 0;
  }
  friend bool operator>(const Rational& a, const Rational& b) noexcept {
    return compare(a, b) > 0;
  }
  friend bool operator>=(const Rational& a, const Rational& b) noexcept {
    return compare(a, b) >= 0;
  }

 private:
  static Rational make_checked(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lim = static_cast<i128>(INT64_MAX);
    if (n > lim || n < -lim || d > lim)
      throw ResourceLimitError("rational arithmetic overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) noexcept {
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void reduce() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace dynsense
