#include "limitgen/set_expr.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "limitgen/errors.hpp"

namespace limitgen {

namespace {

constexpr std::size_t kCorrectionCap = 10'000;

void sort_unique(std::vector<Nat>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool sorted_contains(const std::vector<Nat>& v, const Nat& x) {
  return std::binary_search(v.begin(), v.end(), x);
}

Nat count_less(const std::vector<Nat>& v, const Nat& bound) {
  return Nat(std::lower_bound(v.begin(), v.end(), bound) - v.begin());
}

}  // namespace

SetExpr SetExpr::structured(CellSystemPtr system, std::vector<std::size_t> cells,
                            std::vector<Nat> plus, std::vector<Nat> minus) {
  if (!system) throw std::invalid_argument("SetExpr: null cell system");
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  if (!cells.empty() && cells.back() >= system->cell_count())
    throw std::invalid_argument("SetExpr: cell id out of range");
  sort_unique(plus);
  sort_unique(minus);
  if (plus.size() > kCorrectionCap || minus.size() > kCorrectionCap)
    throw SizeLimit("SetExpr: finite corrections exceed the 10^4 cap");
  for (const Nat& p : plus) {
    if (std::binary_search(cells.begin(), cells.end(), system->label(p)))
      throw std::invalid_argument("SetExpr: plus element labeled into cells");
    if (sorted_contains(minus, p))
      throw std::invalid_argument("SetExpr: plus and minus overlap");
  }
  for (const Nat& m : minus)
    if (!std::binary_search(cells.begin(), cells.end(), system->label(m)))
      throw std::invalid_argument("SetExpr: minus element not labeled into cells");
  Structured s;
  s.system = std::move(system);
  s.cells = std::move(cells);
  s.plus = std::move(plus);
  s.minus = std::move(minus);
  return SetExpr(std::move(s));
}

SetExpr SetExpr::full_domain(CellSystemPtr system) {
  std::vector<std::size_t> cells(system->cell_count());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
  return structured(std::move(system), std::move(cells));
}

SetExpr SetExpr::finite_set(std::vector<Nat> elements) {
  return structured(trivial_system(), {}, std::move(elements));
}

SetExpr SetExpr::single_cell(CellSystemPtr system, std::size_t cell) {
  return structured(std::move(system), {cell});
}

SetExpr SetExpr::opaque(std::function<bool(const Nat&)> member,
                        std::function<Nat(const Nat&)> enumerate,
                        std::string builtin,
                        std::map<std::string, std::uint64_t> params) {
  Opaque o;
  o.member = std::move(member);
  o.enumerate = std::move(enumerate);
  o.builtin = std::move(builtin);
  o.params = std::move(params);
  return SetExpr(std::move(o));
}

bool SetExpr::contains(const Nat& x) const {
  if (is_opaque()) return opaque_rep().member(x);
  const Structured& s = structured_rep();
  if (sorted_contains(s.plus, x)) return true;
  if (sorted_contains(s.minus, x)) return false;
  return std::binary_search(s.cells.begin(), s.cells.end(), s.system->label(x));
}

bool SetExpr::is_full_domain() const {
  if (!is_structured()) return false;
  const Structured& s = structured_rep();
  return s.plus.empty() && s.minus.empty() &&
         s.cells.size() == s.system->cell_count();
}

SetExpr::MemberIterator::MemberIterator(const SetExpr& set)
    : set_(std::make_shared<SetExpr>(set)) {
  if (set_->is_opaque()) return;
  const Structured& s = set_->structured_rep();
  for (std::size_t c : s.cells) {
    Source src;
    const CellMeta& m = s.system->meta(c);
    if (m.card == CellMeta::Card::Finite) {
      src.listed = m.elements;
      std::sort(src.listed.begin(), src.listed.end());
    } else {
      src.infinite = true;  // Unknown cells are walked like infinite ones
      src.cell = c;
    }
    refill(src);
    sources_.push_back(std::move(src));
  }
  if (!s.plus.empty()) {
    Source src;
    src.listed = s.plus;
    refill(src);
    sources_.push_back(std::move(src));
  }
}

void SetExpr::MemberIterator::refill(Source& s) {
  if (s.infinite) {
    s.front = set_->structured_rep().system->cell_nth(s.cell, s.cursor);
    ++s.cursor;
  } else if (s.idx < s.listed.size()) {
    s.front = s.listed[s.idx++];
  } else {
    s.front.reset();
  }
}

std::optional<Nat> SetExpr::MemberIterator::next() {
  if (set_->is_opaque()) {
    try {
      Nat v = set_->opaque_rep().enumerate(opaque_cursor_);
      ++opaque_cursor_;
      return v;
    } catch (const OutOfRange&) {
      return std::nullopt;  // composed opaque view over a finite operand
    }
  }
  const Structured& rep = set_->structured_rep();
  for (;;) {
    Source* best = nullptr;
    for (Source& s : sources_)
      if (s.front && (!best || *s.front < *best->front)) best = &s;
    if (!best) return std::nullopt;
    Nat v = *best->front;
    refill(*best);
    if (!sorted_contains(rep.minus, v)) return v;
  }
}

Nat SetExpr::nth_element(const Nat& n) const {
  if (n < 1) throw OutOfRange("nth_element: n must be >= 1");
  if (is_opaque()) return opaque_rep().enumerate(n);
  MemberIterator it = members();
  Nat remaining = n;
  for (;;) {
    std::optional<Nat> v = it.next();
    if (!v)
      throw OutOfRange("nth_element: set has fewer than " + n.str() +
                       " elements");
    if (--remaining == 0) return *v;
  }
}

Nat SetExpr::count_below(const Nat& bound) const {
  if (bound <= 0) return 0;
  if (is_opaque()) {
    Nat count = 0;
    MemberIterator it = members();
    while (std::optional<Nat> v = it.next()) {
      if (*v >= bound) break;
      ++count;
    }
    return count;
  }
  const Structured& s = structured_rep();
  Nat total = 0;
  for (std::size_t c : s.cells) total += s.system->cell_rank(c, bound);
  total += count_less(s.plus, bound);
  total -= count_less(s.minus, bound);
  return total;
}

std::string SetExpr::describe() const {
  std::ostringstream out;
  if (is_opaque()) {
    const Opaque& o = opaque_rep();
    out << "opaque";
    if (!o.builtin.empty()) {
      out << ":" << o.builtin;
      for (const auto& [k, v] : o.params) out << " " << k << "=" << v;
    }
    return out.str();
  }
  const Structured& s = structured_rep();
  out << s.system->key() << "{";
  for (std::size_t i = 0; i < s.cells.size(); ++i)
    out << (i ? "," : "") << s.cells[i];
  out << "}";
  if (!s.plus.empty()) {
    out << "+{";
    for (std::size_t i = 0; i < s.plus.size(); ++i)
      out << (i ? "," : "") << s.plus[i].str();
    out << "}";
  }
  if (!s.minus.empty()) {
    out << "-{";
    for (std::size_t i = 0; i < s.minus.size(); ++i)
      out << (i ? "," : "") << s.minus[i].str();
    out << "}";
  }
  return out.str();
}

namespace {

enum class BoolOp { And, Or, Diff };

bool apply(BoolOp op, bool a, bool b) {
  switch (op) {
    case BoolOp::And: return a && b;
    case BoolOp::Or: return a || b;
    case BoolOp::Diff: return a && !b;
  }
  return false;
}

/// Same-system boolean algebra: combine cell sets, then reclassify every
/// correction candidate by direct membership.
SetExpr structured_op(const SetExpr& a, const SetExpr& b, BoolOp op) {
  const SetExpr::Structured& sa = a.structured_rep();
  const SetExpr::Structured& sb = b.structured_rep();
  std::vector<std::size_t> cells;
  switch (op) {
    case BoolOp::And:
      std::set_intersection(sa.cells.begin(), sa.cells.end(), sb.cells.begin(),
                            sb.cells.end(), std::back_inserter(cells));
      break;
    case BoolOp::Or:
      std::set_union(sa.cells.begin(), sa.cells.end(), sb.cells.begin(),
                     sb.cells.end(), std::back_inserter(cells));
      break;
    case BoolOp::Diff:
      std::set_difference(sa.cells.begin(), sa.cells.end(), sb.cells.begin(),
                          sb.cells.end(), std::back_inserter(cells));
      break;
  }
  std::vector<Nat> candidates;
  for (const std::vector<Nat>* v : {&sa.plus, &sa.minus, &sb.plus, &sb.minus})
    candidates.insert(candidates.end(), v->begin(), v->end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  std::vector<Nat> plus, minus;
  for (const Nat& u : candidates) {
    bool in_result = apply(op, a.contains(u), b.contains(u));
    bool in_base =
        std::binary_search(cells.begin(), cells.end(), sa.system->label(u));
    if (in_result && !in_base) plus.push_back(u);
    if (!in_result && in_base) minus.push_back(u);
  }
  return SetExpr::structured(sa.system, std::move(cells), std::move(plus),
                             std::move(minus));
}

/// Re-express a structured set over a refined system: keep every refined
/// cell whose factor label lies in the original cell set.
SetExpr lift_onto(const SetExpr& s, const CellSystemPtr& target,
                  const std::function<std::size_t(std::size_t)>& factor_of) {
  const SetExpr::Structured& rep = s.structured_rep();
  std::vector<std::size_t> cells;
  for (std::size_t p = 0; p < target->cell_count(); ++p)
    if (std::binary_search(rep.cells.begin(), rep.cells.end(), factor_of(p)))
      cells.push_back(p);
  return SetExpr::structured(target, std::move(cells), rep.plus, rep.minus);
}

struct MergeState {
  std::vector<Nat> cache;  // members found so far, increasing
};

SetExpr opaque_op(const SetExpr& a, const SetExpr& b, BoolOp op,
                  const ProbePolicy& policy) {
  SetExpr av = a, bv = b;
  auto member = [av, bv, op](const Nat& x) {
    return apply(op, av.contains(x), bv.contains(x));
  };
  auto state = std::make_shared<MergeState>();
  std::uint64_t horizon = policy.horizon;
  auto enumerate = [av, bv, op, state, horizon](const Nat& n) -> Nat {
    if (n <= state->cache.size())
      return state->cache[static_cast<std::size_t>(n) - 1];
    Nat from = state->cache.empty() ? Nat(-1) : state->cache.back();
    // resume a fresh walk past `from`; simple and stateless across calls
    auto ia = av.members();
    auto ib = bv.members();
    std::optional<Nat> fa = ia.next(), fb = ib.next();
    while (Nat(state->cache.size()) < n) {
      std::optional<Nat> candidate;
      switch (op) {
        case BoolOp::Or:
          if (fa && (!fb || *fa <= *fb)) {
            candidate = fa;
            if (fb && *fb == *fa) fb = ib.next();
            fa = ia.next();
          } else if (fb) {
            candidate = fb;
            fb = ib.next();
          }
          break;
        case BoolOp::And:
        case BoolOp::Diff:
          if (!fa) break;
          candidate = fa;
          fa = ia.next();
          if (!apply(op, true, bv.contains(*candidate))) {
            if (*candidate > Nat(horizon) + from)
              throw ProbeExhausted("opaque set walk exceeded probe horizon");
            continue;
          }
          break;
      }
      if (!candidate) throw OutOfRange("opaque enumerator exhausted");
      if (*candidate > from) state->cache.push_back(*candidate);
    }
    return state->cache[static_cast<std::size_t>(n) - 1];
  };
  return SetExpr::opaque(member, enumerate);
}

}  // namespace

namespace {

SetExpr binary_op(const SetExpr& a, const SetExpr& b, BoolOp op,
                  const ProbePolicy& policy) {
  if (a.is_structured() && b.is_structured()) {
    const auto& sa = a.structured_rep();
    const auto& sb = b.structured_rep();
    if (same_system(sa.system, sb.system)) return structured_op(a, b, op);
    CellSystemPtr prod = product_system(sa.system, sb.system, policy);
    if (same_system(prod, sa.system)) {  // b was trivial
      SetExpr rb = lift_onto(b, prod, [](std::size_t) { return 0; });
      return structured_op(a, rb, op);
    }
    if (same_system(prod, sb.system)) {  // a was trivial
      SetExpr ra = lift_onto(a, prod, [](std::size_t) { return 0; });
      return structured_op(ra, b, op);
    }
    std::size_t bc = sb.system->cell_count();
    SetExpr ra = lift_onto(a, prod, [bc](std::size_t p) { return p / bc; });
    SetExpr rb = lift_onto(b, prod, [bc](std::size_t p) { return p % bc; });
    return structured_op(ra, rb, op);
  }
  return opaque_op(a, b, op, policy);
}

}  // namespace

SetExpr set_intersection(const SetExpr& a, const SetExpr& b,
                         const ProbePolicy& policy) {
  return binary_op(a, b, BoolOp::And, policy);
}

SetExpr set_union(const SetExpr& a, const SetExpr& b,
                  const ProbePolicy& policy) {
  return binary_op(a, b, BoolOp::Or, policy);
}

SetExpr set_difference(const SetExpr& a, const SetExpr& b,
                       const ProbePolicy& policy) {
  return binary_op(a, b, BoolOp::Diff, policy);
}

namespace {

/// First member of an infinite cell avoiding two finite exclusion lists.
std::optional<Nat> first_cell_member_avoiding(const CellSystemPtr& system,
                                              std::size_t cell,
                                              const std::vector<Nat>& skip1,
                                              const std::vector<Nat>& skip2,
                                              std::uint64_t cap) {
  for (Nat i = 1; i <= cap + skip1.size() + skip2.size(); ++i) {
    Nat v = system->cell_nth(cell, i);
    if (!sorted_contains(skip1, v) && !sorted_contains(skip2, v)) return v;
  }
  return std::nullopt;
}

SubsetVerdict exact_subset(const SetExpr& a, const SetExpr& b) {
  const auto& sa = a.structured_rep();
  const auto& sb = b.structured_rep();
  SubsetVerdict out;
  std::optional<Nat> witness;
  auto note = [&witness](const Nat& w) {
    if (!witness || w < *witness) witness = w;
  };
  for (const Nat& p : sa.plus)
    if (!b.contains(p)) note(p);
  for (const Nat& m : sb.minus)
    if (a.contains(m)) note(m);
  std::vector<std::size_t> only_a;
  std::set_difference(sa.cells.begin(), sa.cells.end(), sb.cells.begin(),
                      sb.cells.end(), std::back_inserter(only_a));
  for (std::size_t c : only_a) {
    const CellMeta& m = sa.system->meta(c);
    if (m.card == CellMeta::Card::Finite) {
      for (const Nat& e : m.elements)
        if (a.contains(e) && !b.contains(e)) note(e);
    } else {
      // generic members of c lie in a and outside b; corrections are finite
      std::optional<Nat> w;
      try {
        w = first_cell_member_avoiding(sa.system, c, sa.minus, sb.plus, 4);
      } catch (const ProbeExhausted&) {
      }
      if (!w) {
        out.state = SubsetVerdict::State::Unknown;
        return out;
      }
      note(*w);
    }
  }
  if (witness) {
    out.state = SubsetVerdict::State::False;
    out.witness = witness;
  } else {
    out.state = SubsetVerdict::State::True;
  }
  return out;
}

}  // namespace

SubsetVerdict is_subset(const SetExpr& a, const SetExpr& b,
                        const ProbePolicy& policy) {
  if (a.is_structured() && b.is_structured() &&
      same_system(a.structured_rep().system, b.structured_rep().system))
    return exact_subset(a, b);
  // probe: scan a's members below the horizon for the least counterexample
  SubsetVerdict out;
  auto it = a.members();
  for (std::uint64_t steps = 0; steps < policy.horizon; ++steps) {
    std::optional<Nat> v = it.next();
    if (!v) {  // a exhausted: every member checked
      out.state = SubsetVerdict::State::True;
      return out;
    }
    if (*v >= policy.horizon) break;
    if (!b.contains(*v)) {
      out.state = SubsetVerdict::State::False;
      out.witness = *v;
      return out;
    }
  }
  out.state = SubsetVerdict::State::Unknown;
  return out;
}

FinitenessVerdict finiteness(const SetExpr& s, const ProbePolicy& policy) {
  FinitenessVerdict out;
  if (s.is_structured()) {
    const auto& rep = s.structured_rep();
    bool has_unknown = false;
    for (std::size_t c : rep.cells) {
      const CellMeta& m = rep.system->meta(c);
      if (m.card == CellMeta::Card::Infinite) {
        out.state = FinitenessVerdict::State::Infinite;
        auto it = s.members();
        for (std::uint64_t i = 0; i < policy.witness_count; ++i) {
          std::optional<Nat> v = it.next();
          if (!v) break;
          out.witnesses.push_back(*v);
        }
        return out;
      }
      if (m.card == CellMeta::Card::Unknown) has_unknown = true;
    }
    if (has_unknown) {
      out.state = FinitenessVerdict::State::Unknown;
      return out;
    }
    out.state = FinitenessVerdict::State::Finite;
    auto it = s.members();
    while (std::optional<Nat> v = it.next()) out.elements.push_back(*v);
    return out;
  }
  // opaque: certify Infinite with witnesses below the horizon, else Unknown
  auto it = s.members();
  for (std::uint64_t i = 0; i < policy.witness_count; ++i) {
    std::optional<Nat> v = it.next();
    if (!v || *v >= policy.horizon) {
      out.state = FinitenessVerdict::State::Unknown;
      return out;
    }
    out.witnesses.push_back(*v);
  }
  out.state = FinitenessVerdict::State::Infinite;
  return out;
}

bool set_equal(const SetExpr& a, const SetExpr& b, const ProbePolicy& policy) {
  SubsetVerdict ab = is_subset(a, b, policy);
  if (ab.is_false()) return false;
  SubsetVerdict ba = is_subset(b, a, policy);
  if (ba.is_false()) return false;
  if (ab.is_true() && ba.is_true()) return true;
  throw VerdictUnknown("set_equal: undecidable at the current probe policy");
}

}  // namespace limitgen
