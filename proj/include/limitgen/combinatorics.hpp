#ifndef LIMITGEN_COMBINATORICS_HPP
#define LIMITGEN_COMBINATORICS_HPP

#include <cstdint>
#include <vector>

#include "limitgen/nat.hpp"

namespace limitgen {

/// A subset of {1, ..., n} as a little-endian bit mask: bit j-1 encodes
/// membership of element j.
struct SubsetMask {
  std::uint32_t n = 0;
  std::uint32_t bits = 0;

  bool contains(std::uint32_t element) const {
    return (bits >> (element - 1)) & 1u;
  }
  std::uint32_t size() const { return __builtin_popcount(bits); }
  bool subset_of(const SubsetMask& other) const {
    return (bits & ~other.bits) == 0;
  }
  friend bool operator==(const SubsetMask& a, const SubsetMask& b) {
    return a.n == b.n && a.bits == b.bits;
  }
};

/// Width of the subset lattice of a z-element set: C(z, floor(z/2)).
Nat sperner_width(std::uint64_t z);

/// Exact binomial coefficient.
Nat binomial(std::uint64_t n, std::uint64_t k);

/// All subsets of {1..n} of size floor(n/2), ascending by mask value.
std::vector<SubsetMask> middle_layer(std::uint32_t n);

/// A partition of the subset lattice of {1..n} into saturated symmetric
/// chains; chains ordered by their smallest member mask.
struct ChainDecomposition {
  std::uint32_t n = 0;
  std::vector<std::vector<SubsetMask>> chains;
};

/// Bracketing (matched parentheses) construction. Throws SizeLimit for
/// n > 20.
ChainDecomposition symmetric_chain_decomposition(std::uint32_t n);

/// Best set-density guarantee achievable with no memory against any
/// collection of k languages: 1 for k = 1, else 1 / sperner_width(k-1).
Ratio minimax_memoryless(std::uint64_t k);

/// Guarantee with a b-slot adaptive buffer: 1 once b >= k-2, else
/// 1 / sperner_width(k-b-1).
Ratio minimax_buffer(std::uint64_t k, std::uint64_t b);

/// Factor by which b buffered examples improve on the memoryless value.
Ratio buffer_improvement_ratio(std::uint64_t k, std::uint64_t b);

/// Independent oracle: maximum antichain size of the subset lattice of
/// {1..n}, computed as a minimum chain cover via bipartite matching.
/// Intended for n <= 8.
std::uint64_t lattice_width_by_matching(std::uint32_t n);

}  // namespace limitgen

#endif
