#ifndef LIMITGEN_ADVERSARIES_HPP
#define LIMITGEN_ADVERSARIES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "limitgen/combinatorics.hpp"
#include "limitgen/language.hpp"
#include "limitgen/stream.hpp"

namespace limitgen {

/// Construction parameters recorded alongside a hard instance.
struct Certificate {
  std::string kind;
  std::uint64_t k = 0;      // collection size
  std::uint64_t n = 0;      // k - 1
  std::uint64_t width = 0;  // sperner_width(n)
  std::vector<SubsetMask> masks;
  CellSystemPtr system;
  std::vector<SetExpr> cells;  // the partition pieces A_i (and Z last, if any)
};

/// Distinguished symbols and texts for the incremental impossibility
/// instances.
struct DistinguishingTexts {
  std::vector<Nat> symbols;                 // the special elements
  Language base;                            // the shared infinite part
  std::vector<std::vector<Nat>> prefixes;   // symbol words read first
  std::vector<std::vector<Nat>> suffixes;   // symbol words read before the base text
};

struct HardInstance {
  Collection collection;
  std::size_t target_index = 1;
  std::function<StreamPtr()> fixed_enumeration;  // empty when none is pinned
  Certificate certificate;
  std::optional<DistinguishingTexts> texts;

  const Language& target() const { return collection.language(target_index); }
};

/// Round-robin Sperner construction: the target partitioned into
/// sperner_width(k-1) uniform-density cells, one side language per
/// middle-layer mask. For k = 2 the construction degenerates and the
/// instance is {naturals, naturals minus one point}, where the bound 1 is
/// attained at every sample.
HardInstance sperner_hard_instance(std::uint64_t k);

/// Sperner construction with a zero-density separator and the staged
/// enumeration alternating one fresh cell point with ever longer separator
/// blocks; one instance serves every window width.
HardInstance window_hard_instance(std::uint64_t k);

/// Partition of the full domain into m bins along quadratically growing
/// blocks; every bin has lower density 0.
std::vector<SetExpr> zero_density_partition(const Language& k, std::uint64_t m);

/// {target} plus its zero-lower-density partition into k-1 bins.
HardInstance lower_density_instance(std::uint64_t k);

/// The two mod-4 residue languages with infinite intersection and no
/// containment either way.
HardInstance index_pair_instance();

/// Three languages over multiples of three, pairwise finitely different.
HardInstance identification_counterexample();

/// Three pairwise incomparable languages T+{a,b}, T+{a,c}, T+{b,c} with
/// T = {3n : n >= 1}.
HardInstance generation_counterexample(Nat a = Nat(1), Nat b = Nat(2),
                                       Nat c = Nat(4));

struct ElementAdversary {
  StreamPtr stream;
  int proof_case = 0;  // 1 = bad set, 2 = heavy fiber, 3 = injective image
  std::vector<std::uint64_t> planted_rounds;  // rounds forced to fail
};

/// Builds the finitely repeating enumeration defeating an element-output
/// memoryless rule g on target k, after classifying g by probing. Throws
/// CaseUndetermined when no proof case can be certified within the budget.
ElementAdversary element_memoryless_adversary(
    const std::function<Nat(const Nat&)>& g, const Language& k,
    const ProbePolicy& policy = default_probe_policy());

struct IndexAdversary {
  std::size_t target_index = 0;
  StreamPtr stream;
  std::vector<std::uint64_t> planted_rounds;
};

/// Probes an index rule on the intersection of the pair instance, picks the
/// monochromatic side, and enumerates the other language with those points
/// interleaved.
IndexAdversary index_pair_adversary(
    const HardInstance& instance,
    const std::function<std::size_t(const Nat&)>& rule,
    const ProbePolicy& policy = default_probe_policy());

struct WindowAdversary {
  bool window_safe = false;
  std::uint64_t tuples_probed = 0;
  StreamPtr stream;  // null when window_safe
  std::vector<std::uint64_t> planted_rounds;
};

/// Stage s emits one fresh element of L, then a fresh W-tuple on which the
/// queried window rule leaves L, found by searching consecutive fresh
/// tuples. Reports WindowSafe when the budget finds none.
WindowAdversary window_staged_adversary(
    const std::function<SetExpr(const std::vector<Nat>&)>& query,
    const Language& language, std::uint64_t width, std::uint64_t stages,
    std::uint64_t tuple_budget = 1000,
    const ProbePolicy& policy = default_probe_policy());

}  // namespace limitgen

#endif
