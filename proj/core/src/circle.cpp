#include "dynsense/circle.hpp"

namespace dynsense::systems {

CircleCoord CircleCoord::sqrt2_minus_one(unsigned bits) {
  if (bits < 1 || bits > 128) throw UsageError("precision bits must be in [1, 128]");
  if (bits <= 127) {
    // floor(sqrt(2 * 4^bits)) - 2^bits
    const detail::U256 radicand = detail::U256::from(1).shl(2 * bits + 1);
    const u128 root = detail::isqrt_u256(radicand);
    return CircleCoord(root - (u128{1} << bits), bits);
  }
  // bits == 128: refine the 127-bit truncation by one binary digit.
  // With a = floor(sqrt(2) * 2^127), the next digit is 1 iff
  // (2a+1)^2 <= 2^257, i.e. a^2 + a < 2^255.
  const u128 a = detail::isqrt_u256(detail::U256::from(1).shl(255));
  const detail::U256 s = detail::U256::mul(a, a).add(detail::U256::from(a));
  const bool extra = s.compare(detail::U256::from(1).shl(255)) < 0;
  const u128 b = (a << 1) + (extra ? 1 : 0);  // floor(sqrt(2) * 2^128), wrapped
  return CircleCoord(b, 128);                 // subtracting 2^128 is the wrap itself
}

}  // namespace dynsense::systems
