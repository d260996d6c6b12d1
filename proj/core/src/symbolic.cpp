#include "dynsense/symbolic.hpp"

#include <bit>

#include "dynsense/errors.hpp"

namespace dynsense::systems {

int morse_symbol(std::int64_t n) {
  constexpr std::int64_t limit = std::int64_t{1} << 62;
  if (n > limit || n < -limit) throw UsageError("morse index out of range");
  if (n < 0) n = -n - 1;  // m(-k) = m(k-1)
  return std::popcount(static_cast<std::uint64_t>(n)) & 1;
}

SymbolicPoint SymbolicPoint::morse_omega() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::morse_omega;
  return SymbolicPoint(std::move(n));
}

SymbolicPoint SymbolicPoint::eta() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::eta;
  return SymbolicPoint(std::move(n));
}

SymbolicPoint SymbolicPoint::periodic(const std::string& zeros_and_ones) {
  if (zeros_and_ones.empty()) throw UsageError("periodic word must be nonempty");
  auto n = std::make_shared<Node>();
  n->kind = Kind::periodic;
  n->word.reserve(zeros_and_ones.size());
  for (const char c : zeros_and_ones) {
    if (c != '0' && c != '1') throw UsageError("periodic word must be over {0,1}");
    n->word.push_back(c - '0');
  }
  return SymbolicPoint(std::move(n));
}

SymbolicPoint SymbolicPoint::flipped() const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::flip;
  n->inner = node_;
  n->depth = node_->depth + 1;
  return SymbolicPoint(std::move(n));
}

SymbolicPoint SymbolicPoint::shifted(std::int64_t offset) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::shift;
  n->offset = offset;
  n->inner = node_;
  n->depth = node_->depth + 1;
  return SymbolicPoint(std::move(n));
}

std::int64_t SymbolicPoint::shift_offset() const {
  if (node_->kind != Kind::shift) throw UsageError("not a shift rule");
  return node_->offset;
}

SymbolicPoint SymbolicPoint::inner() const {
  if (!node_->inner) throw UsageError("rule has no inner point");
  return SymbolicPoint(node_->inner);
}

const std::vector<int>& SymbolicPoint::word() const {
  if (node_->kind != Kind::periodic) throw UsageError("not a periodic rule");
  return node_->word;
}

int symbolic_eval(const SymbolicPoint& p, std::int64_t i, int depth_limit) {
  if (p.depth() > depth_limit)
    throw ResourceLimitError("symbolic rule depth exceeds limit");
  const SymbolicPoint::Node* n = p.node_.get();
  std::int64_t pos = i;
  int flip = 0;
  for (;;) {
    switch (n->kind) {
      case SymbolicPoint::Kind::shift:
        pos += n->offset;  // (sigma^k xi)(i) = xi(i + k)
        n = n->inner.get();
        break;
      case SymbolicPoint::Kind::flip:
        flip ^= 1;
        n = n->inner.get();
        break;
      case SymbolicPoint::Kind::morse_omega:
        return morse_symbol(pos) ^ flip;
      case SymbolicPoint::Kind::eta:
        return (pos >= 0 ? morse_symbol(pos) : 1 - morse_symbol(pos)) ^ flip;
      case SymbolicPoint::Kind::periodic: {
        const auto len = static_cast<std::int64_t>(n->word.size());
        std::int64_t r = pos % len;
        if (r < 0) r += len;
        return n->word[static_cast<std::size_t>(r)] ^ flip;
      }
    }
  }
}

MetricValue symbolic_metric(const SymbolicPoint& p, const SymbolicPoint& q,
                            std::int64_t radius, int depth_limit) {
  if (radius < 0) throw UsageError("scan radius must be nonnegative");
  for (std::int64_t m = 0; m <= radius; ++m) {
    if (symbolic_eval(p, m, depth_limit) != symbolic_eval(q, m, depth_limit) ||
        (m > 0 && symbolic_eval(p, -m, depth_limit) != symbolic_eval(q, -m, depth_limit)))
      return MetricValue::exact_value(Dyadic::pow2_neg(static_cast<std::uint32_t>(m)));
  }
  return MetricValue::at_most(Dyadic::pow2_neg(static_cast<std::uint32_t>(radius) + 1));
}

std::vector<std::int64_t> odometer_coordinate(const SymbolicPoint& p, int levels) {
  if (levels < 1) throw UsageError("levels must be positive");
  if (levels > 62) throw ResourceLimitError("odometer levels exceed 62");

  // Strip shift and flip layers; flips do not move the odometer coordinate.
  std::int64_t k = 0;
  SymbolicPoint base = p;
  for (;;) {
    if (base.kind() == SymbolicPoint::Kind::shift) {
      if (__builtin_add_overflow(k, base.shift_offset(), &k))
        throw UsageError("shift offset overflow");
      base = base.inner();
    } else if (base.kind() == SymbolicPoint::Kind::flip) {
      base = base.inner();
    } else {
      break;
    }
  }
  if (base.kind() != SymbolicPoint::Kind::morse_omega &&
      base.kind() != SymbolicPoint::Kind::eta)
    throw UnsupportedPointError(
        "odometer coordinates supported only for shifted Morse/eta points");

  std::vector<std::int64_t> a(static_cast<std::size_t>(levels));
  for (int m = 1; m <= levels; ++m) {
    const std::int64_t mod = std::int64_t{1} << m;
    std::int64_t r = k % mod;
    if (r < 0) r += mod;
    a[static_cast<std::size_t>(m - 1)] = r;
  }
  return a;
}

}  // namespace dynsense::systems
