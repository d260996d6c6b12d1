#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dynsense/errors.hpp"

namespace dynsense::families {

using Elem = std::int64_t;

/// A finite subset of [0, window_end), the observed window of a subset
/// of the nonnegative integers (0 included).
class WindowSet {
 public:
  WindowSet() = default;  // empty set over the empty window

  /// Elements must be strictly increasing and lie in [0, window_end).
  WindowSet(Elem window_end, std::vector<Elem> elements);

  /// Sorts and deduplicates, then validates the range.
  static WindowSet from_values(Elem window_end, std::vector<Elem> values);
  static WindowSet full(Elem window_end);

  Elem window_end() const noexcept { return window_end_; }
  const std::vector<Elem>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  bool contains(Elem e) const noexcept;
  Elem max_element() const;  // UsageError on the empty set

  friend bool operator==(const WindowSet&, const WindowSet&) = default;

 private:
  Elem window_end_ = 0;
  std::vector<Elem> elements_;
};

/// Canonical generator sequence for finite subset-sum sets: positive,
/// nondecreasing, repeats allowed.
struct GeneratorSeq {
  std::vector<Elem> gens;

  explicit GeneratorSeq(std::vector<Elem> g);

  friend bool operator==(const GeneratorSeq&, const GeneratorSeq&) = default;
};

// Tagged evidence that a window set meets a family at some degree.
struct BlockWitness {
  Elem start = 0;
  Elem length = 0;
  friend bool operator==(const BlockWitness&, const BlockWitness&) = default;
};
struct FiniteIpWitness {
  GeneratorSeq gens;
  friend bool operator==(const FiniteIpWitness&, const FiniteIpWitness&) = default;
};
struct FiniteDiffWitness {
  std::vector<Elem> base;  // strictly increasing, front() == 0
  friend bool operator==(const FiniteDiffWitness&, const FiniteDiffWitness&) = default;
};
struct SyndeticWitness {
  Elem bound = 0;
  friend bool operator==(const SyndeticWitness&, const SyndeticWitness&) = default;
};

using FamilyWitness =
    std::variant<BlockWitness, FiniteIpWitness, FiniteDiffWitness, SyndeticWitness>;

/// Re-checks a witness against its defining condition, from scratch.
bool witness_valid(const FamilyWitness& witness, const WindowSet& s);

/// Search caps are configuration, not constants. Exceeding one raises
/// ResourceLimitError, never silent truncation.
struct SearchCaps {
  int max_gens = 20;           // fs_closure input length
  int max_ip_length = 12;      // finite-IP search
  int max_diff_length = 10;    // finite-difference search
  int max_ramsey_closure = 15; // 2-coloring enumeration bound
};

/// All nonempty finite subset sums of the generators, sorted, deduplicated.
std::vector<Elem> fs_closure(const GeneratorSeq& gens, int max_gens = 20);

/// Pairwise differences a - b of a sorted base. Strict mode keeps a > b;
/// non-strict additionally includes 0 (the a == b case).
std::vector<Elem> delta_closure(std::span<const Elem> base, bool strict = true);

/// Length of the longest run of consecutive integers contained in s.
Elem max_block_length(const WindowSet& s) noexcept;

/// Smallest b such that every length-b subinterval [k, k+b) with
/// 0 <= k <= window_end - b meets s; absent for the empty set.
std::optional<Elem> min_syndetic_bound(const WindowSet& s) noexcept;

/// Lexicographically smallest nondecreasing positive sequence of the given
/// length whose subset sums all lie in s, or absent. Depth-first with
/// pruning; deterministic.
std::optional<GeneratorSeq> find_finite_ip(const WindowSet& s, int length,
                                           const SearchCaps& caps = {});

/// Lexicographically smallest base E (canonicalized to min(E) = 0) of the
/// given size whose strict pairwise differences all lie in s, or absent.
std::optional<std::vector<Elem>> find_finite_difference(const WindowSet& s,
                                                        int length,
                                                        const SearchCaps& caps = {});

/// Window-scale degree summary. Every attained degree carries a witness
/// that re-validates.
struct FamilyProfile {
  Elem cardinality = 0;
  Elem max_block_length = 0;
  std::optional<Elem> syndetic_bound;
  int max_ip_length = 0;    // largest l <= caps.max_ip_length with a witness
  int max_diff_length = 0;  // largest l <= caps.max_diff_length with a witness
  SearchCaps caps;
  std::optional<BlockWitness> block_witness;
  std::optional<SyndeticWitness> syndetic_witness;
  std::optional<FiniteIpWitness> ip_witness;
  std::optional<FiniteDiffWitness> diff_witness;
};

/// The empty set reports every degree as 0/absent, including the
/// degenerate size-1 difference base {0} which would otherwise fit.
FamilyProfile classify_window(const WindowSet& s, const SearchCaps& caps = {});

/// Exhaustive check that every 2-coloring of fs_closure(gens) leaves a
/// monochromatic finite IP set of length >= target_length. On failure the
/// violating coloring is returned (parallel to `closure`).
struct RamseyCheck {
  bool holds = false;
  std::vector<Elem> closure;
  std::vector<int> coloring;  // empty when holds
};

RamseyCheck ramsey_split_check(const GeneratorSeq& gens, int target_length,
                               const SearchCaps& caps = {});

}  // namespace dynsense::families
