#ifndef LIMITGEN_PROBE_HPP
#define LIMITGEN_PROBE_HPP

#include <cstdint>

namespace limitgen {

/// Budget for probe-based verdicts on opaque or cross-system queries.
/// Structured sets over a shared cell system never consume probes; their
/// verdicts are exact.
struct ProbePolicy {
  /// Members required to certify "infinite".
  std::uint64_t witness_count = 64;
  /// Largest element value (exclusive) scanned while probing.
  std::uint64_t horizon = 1'000'000;
  /// Maximum cell count allowed when refining two systems into a product.
  std::uint64_t cell_budget = 4096;
};

ProbePolicy& default_probe_policy();

}  // namespace limitgen

#endif
