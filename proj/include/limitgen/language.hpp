#ifndef LIMITGEN_LANGUAGE_HPP
#define LIMITGEN_LANGUAGE_HPP

#include <functional>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "limitgen/set_expr.hpp"

namespace limitgen {

/// An infinite set of naturals. Construction verifies infinitude: exactly
/// for structured expressions, by witness probing for opaque ones.
class Language {
 public:
  explicit Language(SetExpr expr,
                    const ProbePolicy& policy = default_probe_policy());

  const SetExpr& expr() const { return expr_; }
  bool contains(const Nat& x) const { return expr_.contains(x); }
  Nat nth_element(const Nat& n) const { return expr_.nth_element(n); }
  SetExpr::MemberIterator members() const { return expr_.members(); }
  std::string describe() const { return expr_.describe(); }

 private:
  SetExpr expr_;
};

/// An indexed family of languages: finite, or countable with lazily
/// materialized prefixes. Indices are 1-based throughout.
class Collection {
 public:
  static Collection finite(std::vector<Language> languages);
  static Collection countable(std::function<Language(std::size_t)> index_fn);
  /// Countable collection cycling through a finite list, so that every
  /// member appears at arbitrarily late indices.
  static Collection countable_cycle(std::vector<Language> languages);

  bool is_finite() const { return finite_; }
  /// Size of a finite collection.
  std::size_t size() const;
  /// 1-based access; countable collections materialize on demand.
  const Language& language(std::size_t index) const;

 private:
  Collection() = default;
  bool finite_ = true;
  mutable std::deque<Language> cache_;
  std::function<Language(std::size_t)> index_fn_;
};

/// Convenience builders for the stock languages used across tests and demos.
namespace demo {
Language naturals();
Language evens();
Language odds();
Language odds_with_zero();
/// {x : x >= threshold} as a trivial-system set with a finite minus.
Language threshold_language(std::uint64_t threshold);
/// Countable collection L_1, L_2, ... with L_t = {x : x >= t}.
Collection threshold_collection();
/// {naturals, evens, odds+{0}} cycled countably.
Collection mixed_countable_collection();
/// Multiples of m.
Language multiples(std::uint64_t m);
/// Residue classes {v : v mod m in residues}.
Language residues(std::uint64_t m, std::vector<std::size_t> residue_set);
}  // namespace demo

}  // namespace limitgen

#endif
