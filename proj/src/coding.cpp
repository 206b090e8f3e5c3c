#include "limitgen/coding.hpp"

#include <algorithm>
#include <set>

#include "limitgen/errors.hpp"

namespace limitgen {

Nat pair_encode(const Nat& u, const Nat& n) {
  Nat s = u + n;
  return s * (s + 1) / 2 + n;
}

std::pair<Nat, Nat> pair_decode(const Nat& p) {
  Nat w = (isqrt(8 * p + 1) - 1) / 2;
  Nat n = p - w * (w + 1) / 2;
  return {w - n, n};
}

Nat seq_encode(const std::vector<Nat>& xs) {
  Nat code = 0;
  for (const Nat& x : xs) code = pair_encode(code, x) + 1;
  return code;
}

std::vector<Nat> seq_decode(Nat code) {
  std::vector<Nat> out;
  while (code > 0) {
    auto [u, x] = pair_decode(code - 1);
    out.push_back(x);
    code = u;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {
constexpr std::size_t kMaxExplicitSteps = 2'000'000;
}

struct CofinalFamilyState {
  std::vector<std::vector<Nat>> table;  // table[i][t-1] = c_{i+1,t}
  std::set<Nat> used;
  std::vector<SetExpr::MemberIterator> iters;
  std::vector<std::optional<Nat>> ahead;
  std::size_t steps = 0;
};

namespace {

CofinalFamilyState* as_state(void* p) {
  return static_cast<CofinalFamilyState*>(p);
}

}  // namespace

CofinalFamily::CofinalFamily(const Collection& coll, const ProbePolicy& policy,
                             std::size_t burn_in)
    : count_(coll.size()) {
  (void)policy;
  if (burn_in < 16) burn_in = 16;
  state_ = std::make_shared<CofinalFamilyState>();
  auto* st = as_state(state_.get());
  for (std::size_t i = 1; i <= count_; ++i) {
    st->table.emplace_back();
    st->iters.push_back(coll.language(i).members());
    st->ahead.push_back(st->iters.back().next());
  }
  extend_to(2 * burn_in);
  detect_pattern(burn_in);
}

void CofinalFamily::extend_to(std::size_t steps) const {
  auto* st = as_state(state_.get());
  if (steps > kMaxExplicitSteps)
    throw ProbeExhausted("cofinal family: explicit recursion cap reached");
  while (st->steps < steps) {
    std::size_t t = st->steps + 1;
    Nat threshold = Nat(t) - 1;  // the t-th domain element
    for (std::size_t i = 0; i < count_; ++i) {
      std::optional<Nat>& ahead = st->ahead[i];
      // advance past the threshold and everything already used
      while (ahead && (*ahead <= threshold || st->used.count(*ahead)))
        ahead = st->iters[i].next();
      if (!ahead)
        throw ProbeExhausted("cofinal family: language enumerator stalled");
      Nat chosen = *ahead;
      if (period_ != 0 && st->table[i].size() >= base_ + period_ - 1) {
        // when certified, extension must agree with the extrapolation
        Nat predicted = element(i + 1, Nat(t));
        if (predicted != chosen)
          throw Error("cofinal family: pattern extrapolation mismatch");
      }
      st->used.insert(chosen);
      st->table[i].push_back(chosen);
      ahead = st->iters[i].next();
    }
    ++st->steps;
  }
}

void CofinalFamily::detect_pattern(std::size_t burn_in) {
  auto* st = as_state(state_.get());
  std::size_t total = st->steps;
  std::size_t start = burn_in;  // 0-based index into the tables
  for (std::size_t period = 1; period <= 64 && start + 2 * period <= total;
       ++period) {
    std::vector<Nat> strides;
    bool ok = true;
    for (std::size_t i = 0; i < count_ && ok; ++i) {
      Nat stride = st->table[i][start + period] - st->table[i][start];
      if (stride <= 0) {
        ok = false;
        break;
      }
      for (std::size_t t = start; t + period < total; ++t)
        if (st->table[i][t + period] != st->table[i][t] + stride) {
          ok = false;
          break;
        }
      strides.push_back(stride);
    }
    if (ok) {
      period_ = period;
      base_ = start + 1;  // 1-based step index
      strides_ = std::move(strides);
      return;
    }
  }
}

Nat CofinalFamily::element(std::size_t i, const Nat& m) const {
  if (i < 1 || i > count_) throw OutOfRange("cofinal family: index");
  if (m < 1) throw OutOfRange("cofinal family: position must be >= 1");
  auto* st = as_state(state_.get());
  if (m <= st->steps)
    return st->table[i - 1][static_cast<std::size_t>(m) - 1];
  if (period_ != 0) {
    Nat offset = m - base_;
    Nat q = offset / period_;
    std::size_t r = static_cast<std::size_t>(Nat(offset % period_));
    return st->table[i - 1][base_ - 1 + r] + strides_[i - 1] * q;
  }
  extend_to(static_cast<std::size_t>(m));
  return st->table[i - 1][static_cast<std::size_t>(m) - 1];
}

std::pair<std::size_t, Nat> CofinalFamily::locate(const Nat& value) const {
  auto* st = as_state(state_.get());
  std::vector<std::pair<std::size_t, Nat>> hits;
  for (std::size_t i = 0; i < count_; ++i) {
    const std::vector<Nat>& tab = st->table[i];
    auto it = std::lower_bound(tab.begin(), tab.end(), value);
    if (it != tab.end() && *it == value) {
      hits.emplace_back(i + 1, Nat(it - tab.begin()) + 1);
      continue;
    }
    if (!tab.empty() && value <= tab.back()) continue;  // not in this prefix
    if (period_ == 0) {
      // no pattern: materialize until the recursion passes the value
      extend_to(static_cast<std::size_t>(value) + 2);
      return locate(value);
    }
    for (std::size_t r = 0; r < period_; ++r) {
      Nat base_val = tab[base_ - 1 + r];
      if (value <= base_val) continue;
      Nat diff = value - base_val;
      if (diff % strides_[i] != 0) continue;
      Nat q = diff / strides_[i];
      Nat m = base_ + r + q * period_;
      if (m > st->steps) hits.emplace_back(i + 1, m);
    }
  }
  if (hits.size() != 1)
    throw DecodeFailure("cofinal family: value " + value.str() +
                        (hits.empty() ? " is not a codeword"
                                      : " matches multiple positions"));
  return hits.front();
}

SetExpr CofinalFamily::as_set(std::shared_ptr<const CofinalFamily> self,
                              std::size_t i) const {
  auto member = [self, i](const Nat& x) {
    try {
      return self->locate(x).first == i;
    } catch (const DecodeFailure&) {
      return false;
    }
  };
  auto enumerate = [self, i](const Nat& n) { return self->element(i, n); };
  return SetExpr::opaque(member, enumerate);
}

std::vector<SetExpr> cofinal_subsets(const Collection& coll,
                                     const ProbePolicy& policy) {
  auto family = std::make_shared<const CofinalFamily>(coll, policy);
  std::vector<SetExpr> out;
  for (std::size_t i = 1; i <= family->size(); ++i)
    out.push_back(family->as_set(family, i));
  return out;
}

CodingGenerator::CodingGenerator(const Collection& coll,
                                 const ProbePolicy& policy,
                                 std::uint64_t round_cap)
    : order_(topological_order(coll, policy)),
      relabeled_(relabel(coll, order_)),
      family_(std::make_shared<const CofinalFamily>(relabeled_, policy)),
      round_cap_(round_cap) {
  if (!family_->pattern_certified())
    throw VerdictUnknown(
        "coding generator: cofinal family admits no certified extrapolation; "
        "codeword positions would be unreachable");
}

CodingState CodingGenerator::initial() const {
  CodingState st;
  st.last_output = family_->element(1, pair_encode(seq_encode({}), 1));
  return st;
}

std::size_t CodingGenerator::replay_identifier(
    const std::vector<Nat>& prefix) const {
  IncrementalState st;
  std::size_t index = 1;
  for (const Nat& x : prefix)
    std::tie(index, st) = incremental_identify_step(relabeled_, st, x);
  return index;
}

std::pair<Nat, CodingState> CodingGenerator::step(const CodingState& state,
                                                  const Nat& x) {
  if (state.decoded_prefix.size() >= round_cap_)
    throw SizeLimit("coding generator: round cap reached");
  auto [i_prev, m_prev] = family_->locate(state.last_output);
  (void)i_prev;
  auto [code_prev, n_prev] = pair_decode(m_prev);
  (void)n_prev;
  std::vector<Nat> prefix = seq_decode(code_prev);
  if (prefix != state.decoded_prefix)
    throw DecodeFailure("coding generator: decoded prefix mismatch");
  prefix.push_back(x);
  std::size_t index = replay_identifier(prefix);
  Nat code = seq_encode(prefix);
  for (Nat n = 0;; ++n) {
    Nat position = pair_encode(code, n);
    Nat candidate = family_->element(index, position);
    if (candidate > state.last_output && candidate > x) {
      CodingState next;
      next.last_output = candidate;
      next.decoded_prefix = std::move(prefix);
      return {candidate, std::move(next)};
    }
  }
}

}  // namespace limitgen
