#ifndef LIMITGEN_CODING_HPP
#define LIMITGEN_CODING_HPP

#include <memory>
#include <utility>
#include <vector>

#include "limitgen/generators.hpp"
#include "limitgen/language.hpp"

namespace limitgen {

/// Cantor pairing (u+n)(u+n+1)/2 + n; fixed-u sections are unbounded in n.
Nat pair_encode(const Nat& u, const Nat& n);
std::pair<Nat, Nat> pair_decode(const Nat& p);

/// Nested sequence code: empty sequence encodes to 0, and appending x maps
/// code c to pair(c, x) + 1.
Nat seq_encode(const std::vector<Nat>& xs);
std::vector<Nat> seq_decode(Nat code);

/// Pairwise disjoint infinite cofinal subsets C_i of the collection
/// members, built by the greedy recursion: step t picks, for each i in
/// order, the least member of L_i above the t-th domain element that avoids
/// everything chosen so far.
///
/// The recursion is materialized for a burn-in window; beyond it, indexing
/// relies on the eventually periodic progression the recursion settles into
/// over arithmetic-progression languages (detected and then verified on a
/// second window). That gives exact random access at the astronomically
/// large positions codewords need, plus the exact inverse.
class CofinalFamily {
 public:
  explicit CofinalFamily(const Collection& coll,
                         const ProbePolicy& policy = default_probe_policy(),
                         std::size_t burn_in = 256);

  std::size_t size() const { return count_; }
  /// d_{i,m}: the m-th member of C_i in increasing order; i, m are 1-based.
  Nat element(std::size_t i, const Nat& m) const;
  /// Inverse of element(); throws DecodeFailure for non-members.
  std::pair<std::size_t, Nat> locate(const Nat& value) const;
  /// Whether extrapolation past the explicit window is available.
  bool pattern_certified() const { return period_ != 0; }

  /// Opaque view of C_i backed by this family.
  SetExpr as_set(std::shared_ptr<const CofinalFamily> self,
                 std::size_t i) const;

 private:
  void extend_to(std::size_t steps) const;
  void detect_pattern(std::size_t burn_in);

  std::size_t count_ = 0;
  std::shared_ptr<void> state_;  // recursion tables, lazily extended
  std::size_t period_ = 0;       // 0 when extrapolation is unavailable
  std::vector<Nat> strides_;     // per-index value advance over one period
  std::size_t base_ = 0;         // first pattern step (1-based)
};

/// The list-of-sets view mandated for the public operation.
std::vector<SetExpr> cofinal_subsets(const Collection& coll,
                                     const ProbePolicy& policy = default_probe_policy());

struct CodingState {
  Nat last_output;
  std::vector<Nat> decoded_prefix;
};

/// Incremental element generator whose output element encodes the full
/// observed prefix: the cofinal subset holding the output names the inner
/// learner's current index, and the position inside it carries the history
/// code. The inner learner is the almost-containment identifier replayed on
/// the decoded prefix.
class CodingGenerator {
 public:
  explicit CodingGenerator(const Collection& coll,
                           const ProbePolicy& policy = default_probe_policy(),
                           std::uint64_t round_cap = 24);

  CodingState initial() const;
  std::pair<Nat, CodingState> step(const CodingState& state, const Nat& x);

  const Collection& relabeled() const { return relabeled_; }
  /// Original index of relabeled position p.
  const std::vector<std::size_t>& order() const { return order_; }
  std::uint64_t round_cap() const { return round_cap_; }

 private:
  std::size_t replay_identifier(const std::vector<Nat>& prefix) const;

  std::vector<std::size_t> order_;  // initialized before the relabeling
  Collection relabeled_;
  std::shared_ptr<const CofinalFamily> family_;
  std::uint64_t round_cap_;
};

}  // namespace limitgen

#endif
