#ifndef LIMITGEN_CELL_SYSTEM_HPP
#define LIMITGEN_CELL_SYSTEM_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "limitgen/nat.hpp"
#include "limitgen/probe.hpp"

namespace limitgen {

/// Exact density of a cell relative to the full domain, when declared.
struct CellDensity {
  Ratio upper;
  Ratio lower;
};

/// Cardinality class of one cell of a labeled partition.
struct CellMeta {
  enum class Card { Finite, Infinite, Unknown };
  Card card = Card::Infinite;
  std::vector<Nat> elements;  // exhaustive member list when Finite
  std::optional<CellDensity> density;
};

/// A total computable labeling of the naturals into finitely many cells.
///
/// Every value receives exactly one label. Infinite cells expose an exact
/// n-th-member map and an exact rank (count below a bound); both are closed
/// forms, never scans, so sparse cells stay cheap at astronomical indices.
class CellSystem {
 public:
  virtual ~CellSystem() = default;

  virtual std::size_t cell_count() const = 0;
  /// Cell id of value x; ids are 0-based.
  virtual std::size_t label(const Nat& x) const = 0;
  virtual const CellMeta& meta(std::size_t cell) const = 0;
  /// n-th member of an infinite cell in increasing order, n >= 1.
  virtual Nat cell_nth(std::size_t cell, const Nat& n) const = 0;
  /// Number of cell members among the values {0, ..., bound-1}.
  virtual Nat cell_rank(std::size_t cell, const Nat& bound) const = 0;

  /// Structural identity; two systems with equal keys label identically.
  virtual std::string key() const = 0;
  virtual std::string type_name() const = 0;
  /// Serializable parameter, or nullopt for derived (product) systems.
  virtual std::optional<std::uint64_t> param() const { return std::nullopt; }

  /// (modulus, residue) when the cell is a full arithmetic progression;
  /// lets products of modular systems stay exact via the CRT.
  virtual std::optional<std::pair<std::uint64_t, std::uint64_t>>
  arithmetic_cell(std::size_t cell) const {
    (void)cell;
    return std::nullopt;
  }
};

using CellSystemPtr = std::shared_ptr<const CellSystem>;

inline bool same_system(const CellSystemPtr& a, const CellSystemPtr& b) {
  return a == b || (a && b && a->key() == b->key());
}

/// One cell covering the whole domain; density (1, 1).
CellSystemPtr trivial_system();

/// Cell j = {v : v == j (mod n)}; each cell has density exactly 1/n.
CellSystemPtr modular_system(std::uint64_t n);

/// Cell 0 holds the values at canonical positions 2^m (m >= 1); the
/// remaining positions are dealt round-robin into cells 1..n. Cell 0 has
/// density 0, the others exactly 1/n.
CellSystemPtr power_separated_system(std::uint64_t n);

/// Consecutive blocks of positions with length t^2 * (1 + s_{t-1}) at block
/// t, dealt round-robin by block index into m cells. Every cell has upper
/// density 1 and lower density 0.
CellSystemPtr growing_block_system(std::uint64_t m);

/// Product refinement: labels are pairs (a-label, b-label). Cell
/// cardinalities are derived exactly from finite factors and certified by
/// probing otherwise; unresolved cells carry Card::Unknown.
CellSystemPtr product_system(const CellSystemPtr& a, const CellSystemPtr& b,
                             const ProbePolicy& policy);

/// Rebuild a named system from its serialized form.
CellSystemPtr system_from_name(const std::string& type_name,
                               std::uint64_t param);

}  // namespace limitgen

#endif
