#include "dynsense/analysis.hpp"

#include <algorithm>
#include <map>

namespace dynsense::analysis {

std::optional<PigeonholePair> pigeonhole_recurrence(
    const systems::CircleCoord& alpha, const systems::CircleCoord& x0,
    const Dyadic& eps, std::span<const std::int64_t> times) {
  if (eps.is_zero()) throw UsageError("eps must be positive");
  alpha.check_same_bits(x0);

  // tau = eps / 2, bucket count k = ceil(1 / tau). Two orbit points in one
  // arc of width 1/k <= tau are within tau, so their time difference moves
  // x0 by less than eps.
  const Dyadic tau = eps.halved();
  std::int64_t k = 0;
  {
    // ceil(2^e / m) for tau = m / 2^e
    if (tau.exponent() > 62) throw ResourceLimitError("eps too small for bucketing");
    const std::int64_t p = std::int64_t{1} << tau.exponent();
    const auto m = static_cast<std::int64_t>(tau.numerator());
    k = (p + m - 1) / m;
  }

  std::vector<std::int64_t> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::map<std::int64_t, std::int64_t> bucket_to_time;
  const unsigned bits = x0.bits();
  for (const std::int64_t s : sorted) {
    const systems::CircleCoord p = systems::rotation_iterate(x0, alpha, s);
    // arc index floor(p * k / 2^bits) via a 256-bit product
    const dynsense::detail::U256 prod = dynsense::detail::U256::mul(
        p.raw(), static_cast<u128>(static_cast<std::uint64_t>(k)));
    const std::int64_t idx =
        static_cast<std::int64_t>(prod.shr(bits).lo);
    const auto [it, inserted] = bucket_to_time.try_emplace(idx, s);
    if (!inserted) {
      const std::int64_t small = it->second;  // earlier, hence smaller
      const std::int64_t diff = s - small;
      if (!(systems::circle_metric(systems::rotation_iterate(x0, alpha, diff), x0) <
            eps))
        throw InternalConsistencyError("pigeonhole pair failed re-verification");
      return PigeonholePair{k, s, small};
    }
  }
  return std::nullopt;
}

CellSpace::CellSpace(std::vector<Rational> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw UsageError("cell space needs at least one cell");
  Rational total{0};
  for (const auto& w : weights_) {
    if (w < Rational{0}) throw UsageError("cell weights must be nonnegative");
    total = total + w;
  }
  if (!(total == Rational{1})) throw UsageError("cell weights must sum to 1");
}

Rational CellSpace::measure(std::span<const std::uint32_t> cells) const {
  Rational total{0};
  for (const std::uint32_t c : cells) {
    if (c >= weights_.size()) throw UsageError("cell index out of range");
    total = total + weights_[c];
  }
  return total;
}

Rational intersection_measure(const CellSpace& space,
                              std::span<const CellSet* const> sets) {
  if (sets.empty()) throw UsageError("intersection of no sets");
  CellSet acc = *sets.front();
  CellSet tmp;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    tmp.clear();
    std::set_intersection(acc.begin(), acc.end(), sets[i]->begin(), sets[i]->end(),
                          std::back_inserter(tmp));
    acc.swap(tmp);
  }
  return space.measure(acc);
}

namespace {

std::int64_t combination_count(int n, int k, std::int64_t limit) {
  // C(n, k), capped at limit + 1
  i128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > limit) return limit + 1;
  }
  return static_cast<std::int64_t>(c);
}

}  // namespace

GillisOutcome gillis_select(const CellSpace& space, const std::vector<CellSet>& sets,
                            const Rational& a, int k, const Rational& eps,
                            std::int64_t exhaustive_limit, int beam_width) {
  const int n = static_cast<int>(sets.size());
  if (k < 1 || k > n) throw UsageError("tuple size k must be in [1, n]");
  for (const auto& s : sets)
    if (space.measure(s) < a)
      throw UsageError("every set must have measure at least a");
  const Rational bound = a.pow(k) - eps;

  if (combination_count(n, k, exhaustive_limit) <= exhaustive_limit) {
    // lexicographic combinations; the first qualifying tuple is returned
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
      std::vector<const CellSet*> chosen;
      chosen.reserve(static_cast<std::size_t>(k));
      for (const int i : idx) chosen.push_back(&sets[static_cast<std::size_t>(i)]);
      const Rational m = intersection_measure(space, chosen);
      if (m >= bound) return GillisOutcome{GillisSelection{idx, m}, true};
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < k; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return GillisOutcome{std::nullopt, true};
  }

  // Greedy beam over partial tuples; deterministic tie-breaking by index
  // order. Heuristic: absence proves nothing.
  struct Partial {
    std::vector<int> idx;
    CellSet cells;
    Rational measure;
  };
  std::vector<Partial> beam;
  for (int i = 0; i < n; ++i) {
    const auto& s = sets[static_cast<std::size_t>(i)];
    beam.push_back(Partial{{i}, s, space.measure(s)});
  }
  const auto shrink = [&](std::vector<Partial>& b) {
    std::stable_sort(b.begin(), b.end(), [](const Partial& x, const Partial& y) {
      if (!(x.measure == y.measure)) return y.measure < x.measure;
      return x.idx < y.idx;
    });
    if (static_cast<int>(b.size()) > beam_width)
      b.resize(static_cast<std::size_t>(beam_width));
  };
  shrink(beam);
  for (int depth = 1; depth < k; ++depth) {
    std::vector<Partial> next;
    for (const auto& p : beam) {
      for (int i = p.idx.back() + 1; i < n; ++i) {
        CellSet inter;
        const auto& s = sets[static_cast<std::size_t>(i)];
        std::set_intersection(p.cells.begin(), p.cells.end(), s.begin(), s.end(),
                              std::back_inserter(inter));
        Partial q{p.idx, std::move(inter), Rational{0}};
        q.idx.push_back(i);
        q.measure = space.measure(q.cells);
        next.push_back(std::move(q));
      }
    }
    shrink(next);
    beam.swap(next);
    if (beam.empty()) break;
  }
  for (const auto& p : beam)
    if (static_cast<int>(p.idx.size()) == k && p.measure >= bound)
      return GillisOutcome{GillisSelection{p.idx, p.measure}, false};
  return GillisOutcome{std::nullopt, false};
}

namespace {

// Exact containment of the cell arc [lo, lo + width) in the open ball around
// center: both endpoints strictly inside and the antipode outside the cell.
bool cell_inside_ball(const systems::CircleCoord& lo, u128 width,
                      const systems::CircleBall& ball) {
  using systems::circle_metric;
  const systems::CircleCoord hi(lo.raw() + width, lo.bits());
  if (!(circle_metric(ball.center, lo) < ball.radius)) return false;
  if (!(circle_metric(ball.center, hi) < ball.radius)) return false;
  const u128 half = u128{1} << (lo.bits() - 1);
  const u128 antipode = (ball.center.raw() + half) & lo.mask();
  const u128 rel = (antipode - lo.raw()) & lo.mask();
  return !(rel < width);
}

}  // namespace

std::optional<OverlapHit> ip_overlap_search(const systems::RotationSystem& sys,
                                            const systems::CircleBall& u,
                                            const families::GeneratorSeq& gens,
                                            std::int64_t cells,
                                            std::optional<Rational> threshold) {
  if (cells < 1 || cells > (std::int64_t{1} << 24))
    throw UsageError("cell count out of range");
  const unsigned bits = sys.bits();
  const u128 width = (bits == 128 ? ~u128{0} : (u128{1} << bits)) / static_cast<std::uint64_t>(cells);
  if (width == 0) throw UsageError("grid finer than the coordinate precision");

  // cells certified inside U
  std::vector<systems::CircleCoord> inside;
  for (std::int64_t c = 0; c < cells; ++c) {
    const systems::CircleCoord lo(width * static_cast<std::uint64_t>(c), bits);
    if (cell_inside_ball(lo, width, u)) inside.push_back(lo);
  }
  const Rational u_lower{static_cast<std::int64_t>(inside.size()), cells};
  if (u_lower.is_zero())
    throw UsageError("grid too coarse to certify a positive measure for U");
  const Rational thr = threshold.value_or(u_lower * u_lower * Rational{1, 2});

  for (const families::Elem q : families::fs_closure(gens)) {
    // count cells inside both U and its translate by -q alpha: the cell and
    // its q-step image both certified inside U
    std::int64_t count = 0;
    for (const auto& lo : inside) {
      const systems::CircleCoord shifted = sys.apply(lo, q);
      if (cell_inside_ball(shifted, width, u)) ++count;
    }
    const Rational overlap{count, cells};
    if (overlap >= thr) return OverlapHit{q, overlap, u_lower};
  }
  return std::nullopt;
}

}  // namespace dynsense::analysis
