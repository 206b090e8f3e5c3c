#include "limitgen/language.hpp"

#include <stdexcept>

#include "limitgen/errors.hpp"

namespace limitgen {

Language::Language(SetExpr expr, const ProbePolicy& policy)
    : expr_(std::move(expr)) {
  FinitenessVerdict v = finiteness(expr_, policy);
  if (v.is_finite())
    throw std::invalid_argument("Language: expression is finite");
  if (!v.is_infinite())
    throw VerdictUnknown(
        "Language: infinitude could not be certified at the probe policy");
}

Collection Collection::finite(std::vector<Language> languages) {
  if (languages.empty())
    throw std::invalid_argument("Collection: empty finite collection");
  // duplicate-free as set expressions, checked where decidable
  for (std::size_t i = 0; i < languages.size(); ++i)
    for (std::size_t j = i + 1; j < languages.size(); ++j) {
      try {
        if (set_equal(languages[i].expr(), languages[j].expr()))
          throw std::invalid_argument(
              "Collection: duplicate languages at indices " +
              std::to_string(i + 1) + " and " + std::to_string(j + 1));
      } catch (const VerdictUnknown&) {
      }
    }
  Collection c;
  c.finite_ = true;
  c.cache_.assign(std::make_move_iterator(languages.begin()),
                  std::make_move_iterator(languages.end()));
  return c;
}

Collection Collection::countable(std::function<Language(std::size_t)> index_fn) {
  Collection c;
  c.finite_ = false;
  c.index_fn_ = std::move(index_fn);
  return c;
}

Collection Collection::countable_cycle(std::vector<Language> languages) {
  if (languages.empty())
    throw std::invalid_argument("Collection: empty cycle");
  auto list = std::make_shared<std::vector<Language>>(std::move(languages));
  return countable([list](std::size_t index) -> Language {
    return (*list)[(index - 1) % list->size()];
  });
}

std::size_t Collection::size() const {
  if (!finite_)
    throw std::logic_error("Collection::size: countable collection");
  return cache_.size();
}

const Language& Collection::language(std::size_t index) const {
  if (index == 0) throw OutOfRange("Collection: indices are 1-based");
  if (finite_) {
    if (index > cache_.size())
      throw OutOfRange("Collection: index " + std::to_string(index) +
                       " out of range");
    return cache_[index - 1];
  }
  while (cache_.size() < index) cache_.push_back(index_fn_(cache_.size() + 1));
  return cache_[index - 1];
}

namespace demo {

Language naturals() { return Language(SetExpr::full_domain(modular_system(2))); }

Language evens() { return Language(SetExpr::single_cell(modular_system(2), 0)); }

Language odds() { return Language(SetExpr::single_cell(modular_system(2), 1)); }

Language odds_with_zero() {
  return Language(SetExpr::structured(modular_system(2), {1}, {Nat(0)}));
}

Language threshold_language(std::uint64_t threshold) {
  std::vector<Nat> below;
  for (std::uint64_t v = 0; v < threshold; ++v) below.push_back(Nat(v));
  return Language(SetExpr::structured(trivial_system(), {0}, {}, below));
}

Collection threshold_collection() {
  return Collection::countable([](std::size_t index) {
    return threshold_language(static_cast<std::uint64_t>(index));
  });
}

Collection mixed_countable_collection() {
  return Collection::countable_cycle({naturals(), evens(), odds_with_zero()});
}

Language multiples(std::uint64_t m) {
  return Language(SetExpr::single_cell(modular_system(m), 0));
}

Language residues(std::uint64_t m, std::vector<std::size_t> residue_set) {
  return Language(SetExpr::structured(modular_system(m), std::move(residue_set)));
}

}  // namespace demo

}  // namespace limitgen
