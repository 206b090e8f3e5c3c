#ifndef LIMITGEN_DENSITY_HPP
#define LIMITGEN_DENSITY_HPP

#include <optional>
#include <vector>

#include "limitgen/language.hpp"
#include "limitgen/set_expr.hpp"

namespace limitgen {

/// Indices (1-based) of the collection members containing x.
std::vector<std::size_t> signature(const Collection& coll, const Nat& x);

/// Intersection of all languages containing x; throws EmptySignature when x
/// lies in no language.
SetExpr signature_intersection(const Collection& coll, const Nat& x,
                               const ProbePolicy& policy = default_probe_policy());

/// Exact per-horizon counting ratios |s ∩ K_{<=n}| / n along the target's
/// canonical enumeration, with tail max/min as the finite surrogates for
/// upper and lower density.
struct DensityEstimate {
  std::vector<Nat> horizons;
  std::vector<Ratio> ratios;
  Ratio upper_est = 0;
  Ratio lower_est = 0;
};

/// Default geometric horizon schedule {2^j : 4 <= j <= 20}.
std::vector<Nat> default_horizon_schedule();

DensityEstimate empirical_density(const SetExpr& s, const Language& k,
                                  std::vector<Nat> horizons,
                                  double burn_in = 0.5,
                                  const ProbePolicy& policy = default_probe_policy());

/// Sum of declared cell upper densities over the cells of s ∩ k, clamped to
/// 1; finite corrections contribute nothing. Requires a shared system with
/// k covering the whole reference domain. Returns nullopt when any involved
/// cell lacks a declared density.
std::optional<Ratio> exact_upper_density(const SetExpr& s, const Language& k);

enum class AlmostOrder {
  LeftBelow,     // a strictly almost-contained in b
  RightBelow,    // b strictly almost-contained in a
  Equivalent,    // finite symmetric difference
  Incomparable,  // both differences infinite
  Unknown
};

AlmostOrder almost_compare(const Language& a, const Language& b,
                           const ProbePolicy& policy = default_probe_policy());

}  // namespace limitgen

#endif
