#ifndef LIMITGEN_GENERATORS_HPP
#define LIMITGEN_GENERATORS_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "limitgen/density.hpp"
#include "limitgen/language.hpp"

namespace limitgen {

/// Maps an element to the prefix length it certifies; defaults to value+1
/// so that J_1 is always available.
using PrefixBijection = std::function<Nat(const Nat&)>;
PrefixBijection default_bijection();

/// Output of the memoryless rule for countable collections: the longest
/// certified-infinite prefix intersection J_{n(x)}(x) of languages
/// containing x. Requires structured prefixes on a shared system; opaque
/// members raise VerdictUnknown when their finiteness cannot be certified.
SetExpr memoryless_countable_step(const Collection& coll,
                                  const PrefixBijection& bijection,
                                  const Nat& x,
                                  const ProbePolicy& policy = default_probe_policy());

/// The largest prefix length n <= bijection(x) with J_n(x) infinite,
/// without materializing the intersection (cell arithmetic only).
Nat memoryless_countable_prefix(const Collection& coll,
                                const PrefixBijection& bijection, const Nat& x,
                                const ProbePolicy& policy = default_probe_policy());

/// Canonical memoryless rule for finite collections: the intersection of
/// all languages containing x when infinite, else the full domain.
SetExpr canonical_intersection_step(const Collection& coll, const Nat& x,
                                    const ProbePolicy& policy = default_probe_policy());

enum class WindowStrategy {
  LastElement,          // canonical rule on the newest entry
  IntersectOverWindow,  // intersection over languages containing the window
};

struct WindowState {
  std::vector<Nat> entries;  // oldest first, pairwise distinct, size <= W
};

/// Output for an arbitrary distinct tuple; exposed so adversaries can query
/// a window strategy without driving a stream.
SetExpr window_output(const Collection& coll, WindowStrategy strategy,
                      const std::vector<Nat>& window,
                      const ProbePolicy& policy = default_probe_policy());

std::pair<SetExpr, WindowState> window_step(
    const Collection& coll, WindowStrategy strategy, std::uint64_t width,
    WindowState state, const Nat& x,
    const ProbePolicy& policy = default_probe_policy());

struct BufferState {
  std::vector<Nat> stored;           // insertion order; never evicted
  std::vector<std::size_t> residual; // 1-based indices of surviving languages
};

BufferState buffer_init(const Collection& coll);

/// Greedy version-space buffer: output the canonical rule over the residual
/// sub-collection, then insert x iff the buffer has room and x strictly
/// shrinks the residual.
std::pair<SetExpr, BufferState> buffer_step(
    const Collection& coll, std::uint64_t capacity, BufferState state,
    const Nat& x, const ProbePolicy& policy = default_probe_policy());

/// Relabeling permutation: position p holds the original index of the p-th
/// language in an order where strictly almost-contained languages come
/// first; ties keep the original order.
std::vector<std::size_t> topological_order(
    const Collection& coll, const ProbePolicy& policy = default_probe_policy());

Collection relabel(const Collection& coll, const std::vector<std::size_t>& order);

struct IncrementalState {
  std::size_t index = 1;
};

/// Keep the guess while consistent, else advance one step, capped at N.
std::pair<std::size_t, IncrementalState> incremental_identify_step(
    const Collection& relabeled, IncrementalState state, const Nat& x);

}  // namespace limitgen

#endif
