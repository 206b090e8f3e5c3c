#include "limitgen/generators.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include "limitgen/errors.hpp"

namespace limitgen {

PrefixBijection default_bijection() {
  return [](const Nat& x) { return x + 1; };
}

namespace {

/// Family intersection over one shared system, classifying every correction
/// candidate once instead of folding pairwise.
SetExpr intersect_family_shared(const std::vector<const SetExpr*>& sets) {
  const auto& first = sets.front()->structured_rep();
  std::vector<std::size_t> cells = first.cells;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    const auto& rep = sets[i]->structured_rep();
    std::vector<std::size_t> merged;
    std::set_intersection(cells.begin(), cells.end(), rep.cells.begin(),
                          rep.cells.end(), std::back_inserter(merged));
    cells = std::move(merged);
  }
  std::vector<Nat> candidates;
  for (const SetExpr* s : sets) {
    const auto& rep = s->structured_rep();
    candidates.insert(candidates.end(), rep.plus.begin(), rep.plus.end());
    candidates.insert(candidates.end(), rep.minus.begin(), rep.minus.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  std::vector<Nat> plus, minus;
  for (const Nat& u : candidates) {
    bool in_all = true;
    for (const SetExpr* s : sets)
      if (!s->contains(u)) {
        in_all = false;
        break;
      }
    bool in_base =
        std::binary_search(cells.begin(), cells.end(), first.system->label(u));
    if (in_all && !in_base) plus.push_back(u);
    if (!in_all && in_base) minus.push_back(u);
  }
  return SetExpr::structured(first.system, std::move(cells), std::move(plus),
                             std::move(minus));
}

bool all_shared_structured(const std::vector<const SetExpr*>& sets) {
  if (sets.empty() || !sets.front()->is_structured()) return false;
  const CellSystemPtr& system = sets.front()->structured_rep().system;
  for (const SetExpr* s : sets)
    if (!s->is_structured() || !same_system(s->structured_rep().system, system))
      return false;
  return true;
}

SetExpr intersect_family(const std::vector<const SetExpr*>& sets,
                         const ProbePolicy& policy) {
  assert(!sets.empty());
  if (all_shared_structured(sets)) return intersect_family_shared(sets);
  SetExpr acc = *sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i)
    acc = set_intersection(acc, *sets[i], policy);
  return acc;
}

/// Full domain expressed over the system of a reference expression, so that
/// later same-system queries stay exact.
SetExpr full_domain_like(const SetExpr& reference) {
  if (reference.is_structured())
    return SetExpr::full_domain(reference.structured_rep().system);
  return SetExpr::full_domain();
}

std::uint64_t to_u64(const Nat& n, const char* what) {
  if (n > Nat(std::numeric_limits<std::uint64_t>::max()))
    throw SizeLimit(std::string(what) + ": index too large");
  return static_cast<std::uint64_t>(n);
}

}  // namespace

Nat memoryless_countable_prefix(const Collection& coll,
                                const PrefixBijection& bijection, const Nat& x,
                                const ProbePolicy& policy) {
  std::uint64_t n_max = to_u64(bijection(x), "memoryless_countable_prefix");
  if (n_max < 1)
    throw std::invalid_argument("bijection must map into the positive integers");

  // Fast path: prefixes structured on one shared system. The intersection
  // is infinite iff its cell set still holds an infinite cell; corrections
  // never matter.
  const Language& first = coll.language(1);
  if (first.expr().is_structured()) {
    const CellSystemPtr& system = first.expr().structured_rep().system;
    std::vector<char> alive(system->cell_count(), 1);
    bool constrained = false;
    bool shared = true;
    auto has_infinite = [&]() {
      if (!constrained) return true;  // empty family: the whole domain
      for (std::size_t c = 0; c < alive.size(); ++c)
        if (alive[c] && system->meta(c).card == CellMeta::Card::Infinite)
          return true;
      return false;
    };
    std::uint64_t n = 1;
    for (; n <= n_max; ++n) {
      const Language& lang = coll.language(n);
      if (!lang.expr().is_structured() ||
          !same_system(lang.expr().structured_rep().system, system)) {
        shared = false;
        break;
      }
      if (!lang.contains(x)) continue;
      const auto& rep = lang.expr().structured_rep();
      std::vector<char> next(alive.size(), 0);
      for (std::size_t c : rep.cells)
        if (alive[c]) next[c] = 1;
      alive = std::move(next);
      constrained = true;
      if (!has_infinite()) return Nat(n - 1);
    }
    if (shared) return Nat(n_max);
  }

  // Generic path: materialize prefix intersections and ask for verdicts.
  SetExpr acc = full_domain_like(first.expr());
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const Language& lang = coll.language(n);
    if (!lang.contains(x)) continue;
    SetExpr next = set_intersection(acc, lang.expr(), policy);
    FinitenessVerdict v = finiteness(next, policy);
    if (v.state == FinitenessVerdict::State::Unknown)
      throw VerdictUnknown(
          "memoryless_countable_step: prefix intersection verdict unknown at n = " +
          std::to_string(n));
    if (v.is_finite()) return Nat(n - 1);
    acc = std::move(next);
  }
  return Nat(n_max);
}

SetExpr memoryless_countable_step(const Collection& coll,
                                  const PrefixBijection& bijection,
                                  const Nat& x, const ProbePolicy& policy) {
  std::uint64_t cutoff =
      to_u64(memoryless_countable_prefix(coll, bijection, x, policy),
             "memoryless_countable_step");
  std::vector<const SetExpr*> members;
  for (std::uint64_t n = 1; n <= cutoff; ++n)
    if (coll.language(n).contains(x)) members.push_back(&coll.language(n).expr());
  if (members.empty()) return full_domain_like(coll.language(1).expr());
  return intersect_family(members, policy);
}

SetExpr canonical_intersection_step(const Collection& coll, const Nat& x,
                                    const ProbePolicy& policy) {
  std::vector<std::size_t> sig = signature(coll, x);
  if (sig.empty())
    throw EmptySignature("canonical_intersection_step: element " + x.str() +
                         " lies in no language");
  std::vector<const SetExpr*> members;
  for (std::size_t i : sig) members.push_back(&coll.language(i).expr());
  SetExpr inter = intersect_family(members, policy);
  FinitenessVerdict v = finiteness(inter, policy);
  if (v.state == FinitenessVerdict::State::Unknown)
    throw VerdictUnknown("canonical_intersection_step: verdict unknown");
  if (v.is_finite()) return full_domain_like(coll.language(sig[0]).expr());
  return inter;
}

SetExpr window_output(const Collection& coll, WindowStrategy strategy,
                      const std::vector<Nat>& window,
                      const ProbePolicy& policy) {
  if (window.empty())
    throw std::invalid_argument("window_output: empty window");
  if (strategy == WindowStrategy::LastElement)
    return canonical_intersection_step(coll, window.back(), policy);
  std::vector<const SetExpr*> members;
  for (std::size_t i = 1; i <= coll.size(); ++i) {
    const Language& lang = coll.language(i);
    bool holds_all = true;
    for (const Nat& u : window)
      if (!lang.contains(u)) {
        holds_all = false;
        break;
      }
    if (holds_all) members.push_back(&lang.expr());
  }
  if (members.empty()) return full_domain_like(coll.language(1).expr());
  SetExpr inter = intersect_family(members, policy);
  FinitenessVerdict v = finiteness(inter, policy);
  if (v.state == FinitenessVerdict::State::Unknown)
    throw VerdictUnknown("window_output: verdict unknown");
  if (v.is_finite()) return full_domain_like(coll.language(1).expr());
  return inter;
}

std::pair<SetExpr, WindowState> window_step(const Collection& coll,
                                            WindowStrategy strategy,
                                            std::uint64_t width,
                                            WindowState state, const Nat& x,
                                            const ProbePolicy& policy) {
  if (width < 1) throw std::invalid_argument("window_step: width must be >= 1");
  if (std::find(state.entries.begin(), state.entries.end(), x) !=
      state.entries.end())
    throw DuplicateInWindow("window_step: " + x.str() +
                            " already retained in the window");
  state.entries.push_back(x);
  if (state.entries.size() > width)
    state.entries.erase(state.entries.begin());
  SetExpr out = window_output(coll, strategy, state.entries, policy);
  return {std::move(out), std::move(state)};
}

BufferState buffer_init(const Collection& coll) {
  BufferState st;
  for (std::size_t i = 1; i <= coll.size(); ++i) st.residual.push_back(i);
  return st;
}

std::pair<SetExpr, BufferState> buffer_step(const Collection& coll,
                                            std::uint64_t capacity,
                                            BufferState state, const Nat& x,
                                            const ProbePolicy& policy) {
  // output first, from the residual version space before the update
  std::vector<const SetExpr*> members;
  for (std::size_t i : state.residual)
    if (coll.language(i).contains(x)) members.push_back(&coll.language(i).expr());
  SetExpr out = full_domain_like(coll.language(1).expr());
  if (!members.empty()) {
    SetExpr inter = intersect_family(members, policy);
    FinitenessVerdict v = finiteness(inter, policy);
    if (v.state == FinitenessVerdict::State::Unknown)
      throw VerdictUnknown("buffer_step: verdict unknown");
    if (v.is_infinite()) out = std::move(inter);
  }
  // greedy update: store x only if it strictly shrinks the residual
  if (state.stored.size() < capacity) {
    std::vector<std::size_t> shrunk;
    for (std::size_t i : state.residual)
      if (coll.language(i).contains(x)) shrunk.push_back(i);
    if (shrunk.size() < state.residual.size()) {
      state.stored.push_back(x);
      state.residual = std::move(shrunk);
    }
  }
  return {std::move(out), std::move(state)};
}

std::vector<std::size_t> topological_order(const Collection& coll,
                                           const ProbePolicy& policy) {
  std::size_t n = coll.size();
  std::vector<std::vector<std::size_t>> after(n + 1);
  std::vector<std::size_t> indegree(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      AlmostOrder v =
          almost_compare(coll.language(i), coll.language(j), policy);
      if (v == AlmostOrder::Unknown)
        throw VerdictUnknown("topological_order: pair (" + std::to_string(i) +
                             ", " + std::to_string(j) + ") undecided");
      if (v == AlmostOrder::LeftBelow) {
        after[i].push_back(j);
        ++indegree[j];
      } else if (v == AlmostOrder::RightBelow) {
        after[j].push_back(i);
        ++indegree[i];
      }
    }
  std::vector<std::size_t> order;
  std::vector<char> done(n + 1, 0);
  while (order.size() < n) {
    std::size_t pick = 0;
    for (std::size_t i = 1; i <= n; ++i)
      if (!done[i] && indegree[i] == 0) {
        pick = i;
        break;
      }
    assert(pick != 0 && "strict almost-containment cannot cycle");
    done[pick] = 1;
    order.push_back(pick);
    for (std::size_t j : after[pick]) --indegree[j];
  }
  return order;
}

Collection relabel(const Collection& coll,
                   const std::vector<std::size_t>& order) {
  std::vector<Language> languages;
  for (std::size_t original : order) languages.push_back(coll.language(original));
  return Collection::finite(std::move(languages));
}

std::pair<std::size_t, IncrementalState> incremental_identify_step(
    const Collection& relabeled, IncrementalState state, const Nat& x) {
  if (!relabeled.language(state.index).contains(x))
    state.index = std::min(state.index + 1, relabeled.size());
  return {state.index, state};
}

}  // namespace limitgen
