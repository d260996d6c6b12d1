#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dynsense/families.hpp"
#include "dynsense/systems.hpp"

namespace dynsense::analysis {

using systems::MetricValue;

/// Per-call budgets. Exceeding one raises ResourceLimitError.
struct Budget {
  std::int64_t max_window = std::int64_t{1} << 20;
  std::size_t max_samples = 65536;
  std::int64_t max_rp_evaluations = 200'000'000;
};

namespace detail {

inline void check_window(std::int64_t n, const Budget& b) {
  if (n < 0) throw UsageError("window length must be nonnegative");
  if (n > b.max_window) throw ResourceLimitError("orbit window exceeds budget");
}

}  // namespace detail

/// All n in [0, N) with T^n x inside U. Membership is exact.
template <class System>
families::WindowSet return_times(const System& sys,
                                 const typename System::Point& x,
                                 const typename System::Neighborhood& u,
                                 std::int64_t window, const Budget& budget = {}) {
  detail::check_window(window, budget);
  std::vector<families::Elem> hits;
  auto cur = sys.cursor(x);
  for (std::int64_t n = 0; n < window; ++n) {
    if (sys.contains(u, cur.value())) hits.push_back(n);
    cur.advance();
  }
  return families::WindowSet(window, std::move(hits));
}

/// Sound under-approximation of {n : U meets T^-n V}: n is reported when
/// some grid sample of U lands in V at time n. Every reported time is
/// certified by a concrete point; absence proves nothing.
template <class System>
families::WindowSet hitting_times(const System& sys,
                                  const typename System::Neighborhood& u,
                                  const typename System::Neighborhood& v,
                                  std::int64_t window, int grid,
                                  const Budget& budget = {}) {
  detail::check_window(window, budget);
  const auto samples = sys.sample(u, grid, budget.max_samples);
  std::vector<char> hit(static_cast<std::size_t>(window), 0);
  for (const auto& s : samples) {
    auto cur = sys.cursor(s);
    for (std::int64_t n = 0; n < window; ++n) {
      if (!hit[static_cast<std::size_t>(n)] && sys.contains(v, cur.value()))
        hit[static_cast<std::size_t>(n)] = 1;
      cur.advance();
    }
  }
  std::vector<families::Elem> hits;
  for (std::int64_t n = 0; n < window; ++n)
    if (hit[static_cast<std::size_t>(n)]) hits.push_back(n);
  return families::WindowSet(window, std::move(hits));
}

/// Distances of one orbit pair over the signed window [-n_back, n_forward).
/// The derived set holds exactly the indices whose distance certifies
/// > delta; upper-bound values at most delta certify the opposite;
/// straddling upper bounds count as ambiguous and are excluded.
struct DivergenceProfile {
  std::int64_t n_back = 0;
  std::int64_t n_forward = 0;
  Dyadic delta;
  std::vector<MetricValue> distances;  // index i corresponds to n = i - n_back
  families::WindowSet exceed;          // indices, window n_back + n_forward
  std::int64_t ambiguity_count = 0;
};

template <class System>
DivergenceProfile divergence_profile(const System& sys,
                                     const typename System::Point& x,
                                     const typename System::Point& y,
                                     const Dyadic& delta, std::int64_t n_forward,
                                     std::int64_t n_back = 0,
                                     const Budget& budget = {}) {
  if (delta.is_zero()) throw UsageError("delta must be positive");
  if (n_back < 0 || n_forward < 0) throw UsageError("window bounds must be nonnegative");
  detail::check_window(n_back + n_forward, budget);

  DivergenceProfile prof;
  prof.n_back = n_back;
  prof.n_forward = n_forward;
  prof.delta = delta;

  const auto x0 = sys.apply(x, -n_back);
  const auto y0 = sys.apply(y, -n_back);
  auto cx = sys.cursor(x0);
  auto cy = sys.cursor(y0);
  const std::int64_t total = n_back + n_forward;
  std::vector<families::Elem> exceed;
  prof.distances.reserve(static_cast<std::size_t>(total));
  for (std::int64_t i = 0; i < total; ++i) {
    const MetricValue mv = sys.distance(cx.value(), cy.value());
    if (mv.certified_above(delta))
      exceed.push_back(i);
    else if (!mv.certified_not_above(delta))
      ++prof.ambiguity_count;
    prof.distances.push_back(mv);
    cx.advance();
    cy.advance();
  }
  prof.exceed = families::WindowSet(total, std::move(exceed));
  return prof;
}

/// Sound under-approximation of the sensitivity time set: n is reported
/// when two grid samples of U have image distance certified > delta (the
/// sample diameter never exceeds the true diameter).
template <class System>
families::WindowSet sensitivity_set(const System& sys,
                                    const typename System::Neighborhood& u,
                                    const Dyadic& delta, std::int64_t window,
                                    int grid, const Budget& budget = {}) {
  if (delta.is_zero()) throw UsageError("delta must be positive");
  detail::check_window(window, budget);
  const auto samples = sys.sample(u, grid, budget.max_samples);
  if (samples.size() < 2) return families::WindowSet(window, {});

  using Cursor = decltype(sys.cursor(samples.front()));
  std::vector<Cursor> cursors;
  cursors.reserve(samples.size());
  for (const auto& s : samples) cursors.push_back(sys.cursor(s));

  std::vector<families::Elem> hits;
  for (std::int64_t n = 0; n < window; ++n) {
    bool exceed = false;
    for (std::size_t i = 0; i < cursors.size() && !exceed; ++i)
      for (std::size_t j = i + 1; j < cursors.size() && !exceed; ++j)
        exceed = sys.distance(cursors[i].value(), cursors[j].value())
                     .certified_above(delta);
    if (exceed) hits.push_back(n);
    for (auto& c : cursors) c.advance();
  }
  return families::WindowSet(window, std::move(hits));
}

/// Minimum recorded orbit distance over n in [0, N] and its first argmin.
/// Upper-bound values dominate as "possibly this small".
struct ProximalityResult {
  MetricValue min;
  std::int64_t argmin = 0;
};

template <class System>
ProximalityResult proximality_inf(const System& sys,
                                  const typename System::Point& x,
                                  const typename System::Point& y,
                                  std::int64_t window, int direction = 1,
                                  const Budget& budget = {}) {
  detail::check_window(window, budget);
  auto cx = sys.cursor(x, direction);
  auto cy = sys.cursor(y, direction);
  ProximalityResult r{sys.distance(cx.value(), cy.value()), 0};
  bool any_bound_only = !r.min.exact;
  for (std::int64_t n = 1; n <= window; ++n) {
    cx.advance();
    cy.advance();
    const MetricValue mv = sys.distance(cx.value(), cy.value());
    if (!mv.exact) any_bound_only = true;
    if (mv.bound < r.min.bound) {
      r.min = mv;
      r.argmin = n;
    }
  }
  // Any scan-limited value admits an arbitrarily small true distance, so the
  // minimum of the window can only be certified as an upper bound.
  if (any_bound_only) r.min = MetricValue::at_most(r.min.bound);
  return r;
}

/// A found regional-proximality witness of the requested order: perturbed
/// points, the time vector, and the re-verified distance of every nonzero
/// 0/1 combination of the times.
template <class System>
struct RpWitness {
  typename System::Point x_prime;
  typename System::Point y_prime;
  std::vector<std::int64_t> times;
  std::vector<std::pair<std::vector<int>, MetricValue>> combos;
};

/// Deterministic scan over grid points near x and y (within delta) and time
/// vectors in [-bound, bound]^order with every component nonzero. Returns
/// the first witness whose 2^order - 1 nonzero combinations all have
/// distance certified < delta. Absence is inconclusive by design.
template <class System>
std::optional<RpWitness<System>> rp_witness_search(
    const System& sys, const typename System::Point& x,
    const typename System::Point& y, int order, const Dyadic& delta,
    std::int64_t bound, int grid, const Budget& budget = {}) {
  if (order < 1 || order > 4) throw UsageError("witness order must be in [1, 4]");
  if (bound < 1) throw UsageError("time bound must be positive");
  if (delta.is_zero()) throw UsageError("delta must be positive");

  const typename System::Neighborhood ux{x, delta};
  const typename System::Neighborhood uy{y, delta};
  const auto xs = sys.sample(ux, grid, budget.max_samples);
  const auto ys = sys.sample(uy, grid, budget.max_samples);

  const std::int64_t extent = static_cast<std::int64_t>(order) * bound;
  {
    const std::int64_t per_pair = 2 * extent + 1;
    std::int64_t nvecs = 1;
    for (int i = 0; i < order; ++i) nvecs *= 2 * bound;
    const std::int64_t cost =
        static_cast<std::int64_t>(xs.size() * ys.size()) * (nvecs + per_pair);
    if (cost > budget.max_rp_evaluations)
      throw ResourceLimitError("witness search budget exceeded");
  }

  // Orbit table over [-extent, extent] for one sample.
  const auto orbit_of = [&](const typename System::Point& p) {
    std::vector<typename System::Point> orbit;
    orbit.reserve(static_cast<std::size_t>(2 * extent + 1));
    auto cur = sys.cursor(sys.apply(p, -extent));
    for (std::int64_t m = -extent; m <= extent; ++m) {
      orbit.push_back(cur.value());
      cur.advance();
    }
    return orbit;
  };

  std::vector<std::int64_t> n(static_cast<std::size_t>(order), -bound);
  const auto next_vector = [&]() -> bool {  // lex order, skipping zeros
    for (int i = order - 1; i >= 0; --i) {
      auto& v = n[static_cast<std::size_t>(i)];
      ++v;
      if (v == 0) ++v;
      if (v <= bound) {
        for (int j = i + 1; j < order; ++j) n[static_cast<std::size_t>(j)] = -bound;
        return true;
      }
    }
    return false;
  };

  for (const auto& xp : xs) {
    const auto ox = orbit_of(xp);
    for (const auto& yp : ys) {
      const auto oy = orbit_of(yp);
      std::fill(n.begin(), n.end(), -bound);
      do {
        RpWitness<System> w{xp, yp, n, {}};
        bool all_ok = true;
        for (std::uint32_t eps = 1; eps < (1u << order) && all_ok; ++eps) {
          std::int64_t t = 0;
          std::vector<int> bits(static_cast<std::size_t>(order));
          for (int i = 0; i < order; ++i) {
            bits[static_cast<std::size_t>(i)] = (eps >> i) & 1u;
            if ((eps >> i) & 1u) t += n[static_cast<std::size_t>(i)];
          }
          const MetricValue mv =
              sys.distance(ox[static_cast<std::size_t>(t + extent)],
                           oy[static_cast<std::size_t>(t + extent)]);
          // certified strictly below delta (upper bounds below delta qualify)
          if (!(mv.bound < delta)) {
            all_ok = false;
            break;
          }
          w.combos.emplace_back(std::move(bits), mv);
        }
        if (all_ok) return w;
      } while (next_vector());
    }
  }
  return std::nullopt;
}

/// Constructive pigeonhole recurrence on the circle: buckets the points
/// x0 + s * alpha into ceil(2 / eps) arcs; any two sharing an arc give a
/// time difference returning x0 into Ball(x0, eps). With more times than
/// buckets a pair is guaranteed. The found difference is re-verified before
/// returning; failure there is an internal error.
struct PigeonholePair {
  std::int64_t bucket_count = 0;
  std::int64_t time_large = 0;  // the pair, time_large > time_small
  std::int64_t time_small = 0;
};

std::optional<PigeonholePair> pigeonhole_recurrence(
    const systems::CircleCoord& alpha, const systems::CircleCoord& x0,
    const Dyadic& eps, std::span<const std::int64_t> times);

/// A finite probability space of weighted cells; weights are exact
/// rationals summing to 1.
class CellSpace {
 public:
  explicit CellSpace(std::vector<Rational> weights);

  std::size_t cell_count() const noexcept { return weights_.size(); }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  Rational measure(std::span<const std::uint32_t> cells) const;

 private:
  std::vector<Rational> weights_;
};

using CellSet = std::vector<std::uint32_t>;  // sorted, unique cell indices

Rational intersection_measure(const CellSpace& space,
                              std::span<const CellSet* const> sets);

/// Search for k indices whose sets intersect in measure >= a^k - eps.
/// Exhaustive (absence is a proof for the instance) when the number of
/// combinations is within the limit, deterministic greedy beam otherwise.
struct GillisSelection {
  std::vector<int> indices;
  Rational measure;
};

struct GillisOutcome {
  std::optional<GillisSelection> selection;
  bool exhaustive = true;
};

GillisOutcome gillis_select(const CellSpace& space, const std::vector<CellSet>& sets,
                            const Rational& a, int k, const Rational& eps,
                            std::int64_t exhaustive_limit = 1'000'000,
                            int beam_width = 64);

/// Scans q over the subset sums of gens in increasing order and returns the
/// first q whose grid-certified overlap measure of U with its q-th preimage
/// meets the threshold (default half the squared certified measure of U).
/// Circle rotations only; the cell grid must certify a positive measure.
struct OverlapHit {
  std::int64_t q = 0;
  Rational overlap_lower;  // certified lower bound at the given grid
  Rational u_lower;        // certified lower bound for U itself
};

std::optional<OverlapHit> ip_overlap_search(
    const systems::RotationSystem& sys, const systems::CircleBall& u,
    const families::GeneratorSeq& gens, std::int64_t cells,
    std::optional<Rational> threshold = std::nullopt);

}  // namespace dynsense::analysis
