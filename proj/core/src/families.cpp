#include "dynsense/families.hpp"

#include <algorithm>
#include <limits>

namespace dynsense::families {

namespace {

Elem checked_add(Elem a, Elem b) {
  Elem r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw UsageError("integer overflow in subset-sum arithmetic");
  return r;
}

Elem checked_mul(Elem a, Elem b) {
  Elem r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw UsageError("integer overflow in subset-sum arithmetic");
  return r;
}

// O(1) membership for the element range of one window set.
class Membership {
 public:
  explicit Membership(const WindowSet& s) : window_end_(s.window_end()) {
    bits_.assign(static_cast<std::size_t>(window_end_), false);
    for (const Elem e : s.elements()) bits_[static_cast<std::size_t>(e)] = true;
  }

  bool operator()(Elem e) const noexcept {
    return e >= 0 && e < window_end_ && bits_[static_cast<std::size_t>(e)];
  }

 private:
  Elem window_end_;
  std::vector<bool> bits_;
};

}  // namespace

WindowSet::WindowSet(Elem window_end, std::vector<Elem> elements)
    : window_end_(window_end), elements_(std::move(elements)) {
  if (window_end_ < 0) throw UsageError("window_end must be nonnegative");
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] < 0 || elements_[i] >= window_end_)
      throw UsageError("window set element out of [0, window_end)");
    if (i > 0 && elements_[i - 1] >= elements_[i])
      throw UsageError("window set elements must be strictly increasing");
  }
}

WindowSet WindowSet::from_values(Elem window_end, std::vector<Elem> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return WindowSet(window_end, std::move(values));
}

WindowSet WindowSet::full(Elem window_end) {
  if (window_end < 0) throw UsageError("window_end must be nonnegative");
  std::vector<Elem> v(static_cast<std::size_t>(window_end));
  for (Elem i = 0; i < window_end; ++i) v[static_cast<std::size_t>(i)] = i;
  return WindowSet(window_end, std::move(v));
}

bool WindowSet::contains(Elem e) const noexcept {
  return std::binary_search(elements_.begin(), elements_.end(), e);
}

Elem WindowSet::max_element() const {
  if (elements_.empty()) throw UsageError("max_element of an empty window set");
  return elements_.back();
}

GeneratorSeq::GeneratorSeq(std::vector<Elem> g) : gens(std::move(g)) {
  if (gens.empty()) throw UsageError("generator sequence must be nonempty");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i] < 1) throw UsageError("generators must be positive");
    if (i > 0 && gens[i - 1] > gens[i])
      throw UsageError("generators must be nondecreasing");
  }
}

std::vector<Elem> fs_closure(const GeneratorSeq& gens, int max_gens) {
  if (static_cast<int>(gens.gens.size()) > max_gens)
    throw ResourceLimitError("fs_closure generator count exceeds cap");
  std::vector<Elem> sums;
  for (const Elem g : gens.gens) {
    std::vector<Elem> next = sums;
    next.push_back(g);
    for (const Elem s : sums) next.push_back(checked_add(s, g));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    sums = std::move(next);
  }
  return sums;
}

std::vector<Elem> delta_closure(std::span<const Elem> base, bool strict) {
  if (base.empty()) throw UsageError("delta_closure of an empty base");
  if (!std::is_sorted(base.begin(), base.end()))
    throw UsageError("delta_closure base must be sorted");
  std::vector<Elem> out;
  if (!strict) out.push_back(0);
  for (std::size_t j = 1; j < base.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (base[j] > base[i]) out.push_back(base[j] - base[i]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Elem max_block_length(const WindowSet& s) noexcept {
  const auto& e = s.elements();
  Elem best = 0;
  Elem run = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    run = (i > 0 && e[i] == e[i - 1] + 1) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

std::optional<Elem> min_syndetic_bound(const WindowSet& s) noexcept {
  if (s.empty()) return std::nullopt;
  // b = longest run of consecutive non-elements + 1: an interval misses s
  // exactly when it fits inside such a run.
  const auto& e = s.elements();
  Elem gap = e.front();  // leading run [0, e0)
  gap = std::max(gap, s.window_end() - 1 - e.back());
  for (std::size_t i = 1; i < e.size(); ++i)
    gap = std::max(gap, e[i] - e[i - 1] - 1);
  return gap + 1;
}

bool witness_valid(const FamilyWitness& witness, const WindowSet& s) {
  return std::visit(
      [&](const auto& w) -> bool {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, BlockWitness>) {
          if (w.length <= 0) return false;
          for (Elem n = w.start; n < w.start + w.length; ++n)
            if (!s.contains(n)) return false;
          return true;
        } else if constexpr (std::is_same_v<W, FiniteIpWitness>) {
          for (const Elem v : fs_closure(w.gens, 64))
            if (!s.contains(v)) return false;
          return true;
        } else if constexpr (std::is_same_v<W, FiniteDiffWitness>) {
          if (w.base.empty() || w.base.front() != 0) return false;
          if (!std::is_sorted(w.base.begin(), w.base.end())) return false;
          for (const Elem v : delta_closure(w.base, /*strict=*/true))
            if (!s.contains(v)) return false;
          return true;
        } else {
          static_assert(std::is_same_v<W, SyndeticWitness>);
          if (w.bound <= 0) return false;
          for (Elem k = 0; k + w.bound <= s.window_end(); ++k) {
            bool hit = false;
            for (Elem n = k; n < k + w.bound && !hit; ++n) hit = s.contains(n);
            if (!hit) return false;
          }
          return true;
        }
      },
      witness);
}

namespace {

// Depth-first extension of a nondecreasing generator prefix. Candidates are
// scanned in increasing order, so the first completed sequence is the
// lexicographically smallest.
bool extend_ip(const Membership& in, const std::vector<Elem>& selems, Elem max_s,
               int length, std::vector<Elem>& gens, std::vector<Elem>& sums) {
  if (static_cast<int>(gens.size()) == length) return true;
  const int remaining = length - static_cast<int>(gens.size());
  const Elem lo = gens.empty() ? 1 : gens.back();
  Elem partial = 0;
  for (const Elem g : gens) partial = checked_add(partial, g);
  auto it = std::lower_bound(selems.begin(), selems.end(), lo);
  for (; it != selems.end(); ++it) {
    const Elem g = *it;
    // The full subset sum of the finished sequence is itself a member, and
    // all later generators are >= g.
    if (checked_add(partial, checked_mul(g, remaining)) > max_s) break;
    bool ok = true;
    for (const Elem s : sums) {
      if (!in(s + g)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const std::size_t nsums = sums.size();
    sums.push_back(g);
    for (std::size_t i = 0; i < nsums; ++i) sums.push_back(sums[i] + g);
    gens.push_back(g);
    if (extend_ip(in, selems, max_s, length, gens, sums)) return true;
    gens.pop_back();
    sums.resize(nsums);
  }
  return false;
}

}  // namespace

std::optional<GeneratorSeq> find_finite_ip(const WindowSet& s, int length,
                                           const SearchCaps& caps) {
  if (length < 1) throw UsageError("finite IP length must be positive");
  if (length > caps.max_ip_length)
    throw ResourceLimitError("finite IP search length exceeds cap");
  if (s.empty()) return std::nullopt;
  const Membership in(s);
  std::vector<Elem> gens;
  std::vector<Elem> sums;
  gens.reserve(static_cast<std::size_t>(length));
  if (!extend_ip(in, s.elements(), s.max_element(), length, gens, sums))
    return std::nullopt;
  return GeneratorSeq(std::move(gens));
}

namespace {

bool extend_diff(const Membership& in, const std::vector<Elem>& selems, int length,
                 std::vector<Elem>& base) {
  if (static_cast<int>(base.size()) == length) return true;
  auto it = std::upper_bound(selems.begin(), selems.end(), base.back());
  for (; it != selems.end(); ++it) {
    const Elem e = *it;  // e - 0 = e must itself be a member
    bool ok = true;
    for (const Elem b : base) {
      if (!in(e - b)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    base.push_back(e);
    if (extend_diff(in, selems, length, base)) return true;
    base.pop_back();
  }
  return false;
}

}  // namespace

std::optional<std::vector<Elem>> find_finite_difference(const WindowSet& s,
                                                        int length,
                                                        const SearchCaps& caps) {
  if (length < 1) throw UsageError("finite difference length must be positive");
  if (length > caps.max_diff_length)
    throw ResourceLimitError("finite difference search length exceeds cap");
  if (length == 1) return std::vector<Elem>{0};  // no difference to demand
  if (s.empty()) return std::nullopt;
  const Membership in(s);
  std::vector<Elem> base{0};
  if (!extend_diff(in, s.elements(), length, base)) return std::nullopt;
  return base;
}

namespace {

// Largest degree in [1, cap] admitting a witness. Both finders are monotone
// in the degree (drop the last generator / the largest base element), so
// binary search is sound.
template <typename Finder>
int max_degree(int cap, const Finder& present) {
  int lo = 0;
  int hi = cap;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (present(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace

FamilyProfile classify_window(const WindowSet& s, const SearchCaps& caps) {
  FamilyProfile p;
  p.caps = caps;
  p.cardinality = static_cast<Elem>(s.size());
  p.max_block_length = max_block_length(s);
  if (p.max_block_length > 0) {
    const auto& e = s.elements();
    Elem run = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      run = (i > 0 && e[i] == e[i - 1] + 1) ? run + 1 : 1;
      if (run == p.max_block_length) {
        p.block_witness = BlockWitness{e[i] - run + 1, run};
        break;
      }
    }
  }
  if (const auto b = min_syndetic_bound(s)) {
    p.syndetic_bound = *b;
    p.syndetic_witness = SyndeticWitness{*b};
  }
  if (s.empty()) return p;  // every degree 0/absent by convention

  std::optional<GeneratorSeq> best_ip;
  p.max_ip_length = max_degree(caps.max_ip_length, [&](int l) {
    auto r = find_finite_ip(s, l, caps);
    if (r) best_ip = r;
    return r.has_value();
  });
  if (best_ip && static_cast<int>(best_ip->gens.size()) != p.max_ip_length)
    best_ip = find_finite_ip(s, p.max_ip_length, caps);
  if (p.max_ip_length > 0) p.ip_witness = FiniteIpWitness{*best_ip};

  std::optional<std::vector<Elem>> best_diff;
  p.max_diff_length = max_degree(caps.max_diff_length, [&](int l) {
    auto r = find_finite_difference(s, l, caps);
    if (r) best_diff = r;
    return r.has_value();
  });
  if (best_diff && static_cast<int>(best_diff->size()) != p.max_diff_length)
    best_diff = find_finite_difference(s, p.max_diff_length, caps);
  if (p.max_diff_length > 0) p.diff_witness = FiniteDiffWitness{*best_diff};

  return p;
}

RamseyCheck ramsey_split_check(const GeneratorSeq& gens, int target_length,
                               const SearchCaps& caps) {
  if (target_length < 1) throw UsageError("target length must be positive");
  const std::vector<Elem> closure = fs_closure(gens, caps.max_gens);
  const int n = static_cast<int>(closure.size());
  if (n > caps.max_ramsey_closure)
    throw ResourceLimitError("fs_closure too large for coloring enumeration");

  const Elem window = closure.back() + 1;
  RamseyCheck result;
  result.closure = closure;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<Elem> c0;
    std::vector<Elem> c1;
    for (int i = 0; i < n; ++i)
      ((mask >> i) & 1u ? c1 : c0).push_back(closure[static_cast<std::size_t>(i)]);
    const bool mono =
        (!c0.empty() &&
         find_finite_ip(WindowSet(window, c0), target_length, caps).has_value()) ||
        (!c1.empty() &&
         find_finite_ip(WindowSet(window, c1), target_length, caps).has_value());
    if (!mono) {
      result.holds = false;
      result.coloring.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        result.coloring[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
      return result;
    }
  }
  result.holds = true;
  return result;
}

}  // namespace dynsense::families
