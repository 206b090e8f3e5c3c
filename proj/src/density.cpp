#include "limitgen/density.hpp"

#include <algorithm>

#include "limitgen/errors.hpp"

namespace limitgen {

std::vector<std::size_t> signature(const Collection& coll, const Nat& x) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= coll.size(); ++i)
    if (coll.language(i).contains(x)) out.push_back(i);
  return out;
}

SetExpr signature_intersection(const Collection& coll, const Nat& x,
                               const ProbePolicy& policy) {
  std::vector<std::size_t> sig = signature(coll, x);
  if (sig.empty())
    throw EmptySignature("signature_intersection: element " + x.str() +
                         " lies in no language");
  SetExpr acc = coll.language(sig[0]).expr();
  for (std::size_t j = 1; j < sig.size(); ++j)
    acc = set_intersection(acc, coll.language(sig[j]).expr(), policy);
  return acc;
}

std::vector<Nat> default_horizon_schedule() {
  std::vector<Nat> out;
  for (unsigned j = 4; j <= 20; ++j) out.push_back(Nat(1) << j);
  return out;
}

DensityEstimate empirical_density(const SetExpr& s, const Language& k,
                                  std::vector<Nat> horizons, double burn_in,
                                  const ProbePolicy& policy) {
  if (horizons.empty())
    throw std::invalid_argument("empirical_density: empty horizon schedule");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1])
      throw std::invalid_argument("empirical_density: schedule not increasing");

  DensityEstimate est;
  est.horizons = std::move(horizons);
  if (k.expr().is_full_domain()) {
    // K_{<=n} is {0,...,n-1}; count by exact rank
    for (const Nat& n : est.horizons)
      est.ratios.push_back(Ratio(s.count_below(n), n));
  } else {
    auto it = k.members();
    Nat position = 0, hits = 0;
    std::size_t next = 0;
    while (next < est.horizons.size()) {
      std::optional<Nat> v = it.next();
      if (!v)
        throw ProbeExhausted("empirical_density: target enumeration ended");
      ++position;
      if (s.contains(*v)) ++hits;
      if (position == est.horizons[next]) {
        est.ratios.push_back(Ratio(hits, position));
        ++next;
      }
    }
    (void)policy;
  }
  std::size_t tail_start = static_cast<std::size_t>(
      burn_in * static_cast<double>(est.ratios.size()));
  if (tail_start >= est.ratios.size()) tail_start = est.ratios.size() - 1;
  est.upper_est = est.ratios[tail_start];
  est.lower_est = est.ratios[tail_start];
  for (std::size_t i = tail_start; i < est.ratios.size(); ++i) {
    est.upper_est = std::max(est.upper_est, est.ratios[i]);
    est.lower_est = std::min(est.lower_est, est.ratios[i]);
  }
  return est;
}

std::optional<Ratio> exact_upper_density(const SetExpr& s, const Language& k) {
  if (!s.is_structured() || !k.expr().is_structured()) return std::nullopt;
  const auto& ss = s.structured_rep();
  const auto& ks = k.expr().structured_rep();
  if (!same_system(ss.system, ks.system)) return std::nullopt;
  if (!k.expr().is_full_domain()) return std::nullopt;
  Ratio total = 0;
  for (std::size_t c : ss.cells) {
    const CellMeta& m = ss.system->meta(c);
    if (m.card == CellMeta::Card::Finite) continue;
    if (!m.density) return std::nullopt;
    total += m.density->upper;
  }
  return total > 1 ? Ratio(1) : total;
}

AlmostOrder almost_compare(const Language& a, const Language& b,
                           const ProbePolicy& policy) {
  FinitenessVerdict ab =
      finiteness(set_difference(a.expr(), b.expr(), policy), policy);
  FinitenessVerdict ba =
      finiteness(set_difference(b.expr(), a.expr(), policy), policy);
  if (ab.state == FinitenessVerdict::State::Unknown ||
      ba.state == FinitenessVerdict::State::Unknown)
    return AlmostOrder::Unknown;
  if (ab.is_finite() && ba.is_finite()) return AlmostOrder::Equivalent;
  if (ab.is_finite()) return AlmostOrder::LeftBelow;
  if (ba.is_finite()) return AlmostOrder::RightBelow;
  return AlmostOrder::Incomparable;
}

}  // namespace limitgen
