#ifndef LIMITGEN_SET_EXPR_HPP
#define LIMITGEN_SET_EXPR_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "limitgen/cell_system.hpp"
#include "limitgen/nat.hpp"
#include "limitgen/probe.hpp"

namespace limitgen {

/// Tri-state answer to "is a a subset of b".
struct SubsetVerdict {
  enum class State { True, False, Unknown };
  State state = State::Unknown;
  std::optional<Nat> witness;  // least known element of a \ b when False

  bool is_true() const { return state == State::True; }
  bool is_false() const { return state == State::False; }
};

struct FinitenessVerdict {
  enum class State { Finite, Infinite, Unknown };
  State state = State::Unknown;
  std::vector<Nat> elements;   // exhaustive when Finite
  std::vector<Nat> witnesses;  // strictly increasing members when Infinite

  bool is_finite() const { return state == State::Finite; }
  bool is_infinite() const { return state == State::Infinite; }
};

/// A computable set of naturals.
///
/// Structured sets are unions of cells of a labeled partition, adjusted by
/// finite plus/minus corrections; all queries on them are exact. Opaque sets
/// carry a membership predicate and a strictly increasing enumerator and
/// answer through probes.
class SetExpr {
 public:
  struct Structured {
    CellSystemPtr system;
    std::vector<std::size_t> cells;  // sorted cell ids
    std::vector<Nat> plus;           // sorted; labels outside `cells`
    std::vector<Nat> minus;          // sorted; labels inside `cells`
  };

  struct Opaque {
    std::function<bool(const Nat&)> member;
    /// n-th member in increasing order, n >= 1.
    std::function<Nat(const Nat&)> enumerate;
    std::string builtin;  // registry name; empty when not serializable
    std::map<std::string, std::uint64_t> params;
  };

  static SetExpr structured(CellSystemPtr system, std::vector<std::size_t> cells,
                            std::vector<Nat> plus = {},
                            std::vector<Nat> minus = {});
  static SetExpr full_domain(CellSystemPtr system = trivial_system());
  /// Finite set as a pure plus-correction over the trivial system.
  static SetExpr finite_set(std::vector<Nat> elements);
  static SetExpr single_cell(CellSystemPtr system, std::size_t cell);
  static SetExpr opaque(std::function<bool(const Nat&)> member,
                        std::function<Nat(const Nat&)> enumerate,
                        std::string builtin = {},
                        std::map<std::string, std::uint64_t> params = {});

  bool is_structured() const { return std::holds_alternative<Structured>(rep_); }
  bool is_opaque() const { return std::holds_alternative<Opaque>(rep_); }
  const Structured& structured_rep() const { return std::get<Structured>(rep_); }
  const Opaque& opaque_rep() const { return std::get<Opaque>(rep_); }

  bool contains(const Nat& x) const;

  /// Walks members in strictly increasing order.
  class MemberIterator {
   public:
    explicit MemberIterator(const SetExpr& set);
    /// Next member; nullopt once a finite set is exhausted.
    std::optional<Nat> next();

   private:
    struct Source {
      bool infinite = false;
      std::size_t cell = 0;      // infinite cell cursor
      Nat cursor = 1;            // next index into cell_nth
      std::vector<Nat> listed;   // finite cell elements or plus set
      std::size_t idx = 0;
      std::optional<Nat> front;
    };
    void refill(Source& s);
    std::shared_ptr<const SetExpr> set_;
    std::vector<Source> sources_;
    Nat opaque_cursor_ = 1;
  };

  MemberIterator members() const { return MemberIterator(*this); }

  /// n-th member in canonical order, n >= 1.
  Nat nth_element(const Nat& n) const;

  /// Exact number of members with value < bound. Closed form for structured
  /// sets; opaque sets walk their enumerator.
  Nat count_below(const Nat& bound) const;

  /// Compact human-readable form used in transcripts.
  std::string describe() const;

  /// True when this is the whole domain (all cells, no corrections).
  bool is_full_domain() const;

 private:
  explicit SetExpr(Structured s) : rep_(std::move(s)) {}
  explicit SetExpr(Opaque o) : rep_(std::move(o)) {}
  std::variant<Structured, Opaque> rep_;
};

SetExpr set_intersection(const SetExpr& a, const SetExpr& b,
                         const ProbePolicy& policy = default_probe_policy());
SetExpr set_union(const SetExpr& a, const SetExpr& b,
                  const ProbePolicy& policy = default_probe_policy());
SetExpr set_difference(const SetExpr& a, const SetExpr& b,
                       const ProbePolicy& policy = default_probe_policy());

/// Exact for structured operands over a common system; otherwise probes and
/// can only answer False (with the least counterexample) or Unknown.
SubsetVerdict is_subset(const SetExpr& a, const SetExpr& b,
                        const ProbePolicy& policy = default_probe_policy());

FinitenessVerdict finiteness(const SetExpr& s,
                             const ProbePolicy& policy = default_probe_policy());

/// Extensional equality; throws VerdictUnknown when undecidable at the
/// given probe policy.
bool set_equal(const SetExpr& a, const SetExpr& b,
               const ProbePolicy& policy = default_probe_policy());

}  // namespace limitgen

#endif
