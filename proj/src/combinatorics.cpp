#include "limitgen/combinatorics.hpp"

#include <algorithm>
#include <map>

#include "limitgen/errors.hpp"

namespace limitgen {

Nat binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Nat result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

Nat sperner_width(std::uint64_t z) { return binomial(z, z / 2); }

std::vector<SubsetMask> middle_layer(std::uint32_t n) {
  if (n == 0 || n > 31)
    throw SizeLimit("middle_layer: n must be in [1, 31]");
  std::uint32_t want = n / 2;
  std::vector<SubsetMask> out;
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits)
    if (__builtin_popcount(bits) == static_cast<int>(want))
      out.push_back(SubsetMask{n, bits});
  return out;
}

namespace {

/// Positions (1-based) of a mask's unmatched zeros under the bracketing
/// rule: scan left to right, ones close, zeros open.
struct Bracketing {
  std::uint32_t root;                    // mask with unmatched ones cleared
  std::vector<std::uint32_t> unmatched;  // open positions of the root, ascending
  std::uint32_t rank;                    // number of unmatched ones in the mask
};

Bracketing bracket(std::uint32_t n, std::uint32_t bits) {
  std::vector<std::uint32_t> stack;           // open positions
  std::vector<std::uint32_t> unmatched_ones;  // close positions with empty stack
  for (std::uint32_t pos = 1; pos <= n; ++pos) {
    if ((bits >> (pos - 1)) & 1u) {
      if (!stack.empty())
        stack.pop_back();
      else
        unmatched_ones.push_back(pos);
    } else {
      stack.push_back(pos);
    }
  }
  Bracketing b;
  b.rank = static_cast<std::uint32_t>(unmatched_ones.size());
  b.root = bits;
  for (std::uint32_t pos : unmatched_ones) b.root &= ~(1u << (pos - 1));
  // the root's unmatched opens are the former unmatched ones followed by
  // the still-open positions, already in ascending order
  b.unmatched = unmatched_ones;
  b.unmatched.insert(b.unmatched.end(), stack.begin(), stack.end());
  return b;
}

}  // namespace

ChainDecomposition symmetric_chain_decomposition(std::uint32_t n) {
  if (n < 1) throw SizeLimit("symmetric_chain_decomposition: n must be >= 1");
  if (n > 20)
    throw SizeLimit("symmetric_chain_decomposition: exhaustive regime ends at n = 20");
  std::map<std::uint32_t, std::vector<SubsetMask>> groups;
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    Bracketing b = bracket(n, bits);
    auto& chain = groups[b.root];
    if (chain.size() <= b.rank) chain.resize(b.rank + 1);
    chain[b.rank] = SubsetMask{n, bits};
  }
  ChainDecomposition out;
  out.n = n;
  for (auto& [root, chain] : groups) out.chains.push_back(std::move(chain));
  std::sort(out.chains.begin(), out.chains.end(),
            [](const auto& a, const auto& b) {
              return a.front().bits < b.front().bits;
            });
  return out;
}

Ratio minimax_memoryless(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("minimax_memoryless: k must be >= 1");
  if (k == 1) return 1;
  return Ratio(1, sperner_width(k - 1));
}

Ratio minimax_buffer(std::uint64_t k, std::uint64_t b) {
  if (k == 0) throw std::invalid_argument("minimax_buffer: k must be >= 1");
  if (k <= 2 || b >= k - 2) return 1;
  return Ratio(1, sperner_width(k - b - 1));
}

Ratio buffer_improvement_ratio(std::uint64_t k, std::uint64_t b) {
  return minimax_buffer(k, b) / minimax_memoryless(k);
}

namespace {

/// Kuhn augmenting-path matching on the comparability DAG.
bool augment(std::uint32_t u, const std::vector<std::vector<std::uint32_t>>& adj,
             std::vector<int>& match_right, std::vector<bool>& visited) {
  for (std::uint32_t v : adj[u]) {
    if (visited[v]) continue;
    visited[v] = true;
    if (match_right[v] < 0 ||
        augment(static_cast<std::uint32_t>(match_right[v]), adj, match_right,
                visited)) {
      match_right[v] = static_cast<int>(u);
      return true;
    }
  }
  return false;
}

}  // namespace

std::uint64_t lattice_width_by_matching(std::uint32_t n) {
  if (n > 8) throw SizeLimit("lattice_width_by_matching: n must be <= 8");
  std::uint32_t count = 1u << n;
  std::vector<std::vector<std::uint32_t>> adj(count);
  for (std::uint32_t a = 0; a < count; ++a)
    for (std::uint32_t b = 0; b < count; ++b)
      if (a != b && (a & ~b) == 0) adj[a].push_back(b);  // a proper subset of b
  std::vector<int> match_right(count, -1);
  std::uint64_t matched = 0;
  for (std::uint32_t u = 0; u < count; ++u) {
    std::vector<bool> visited(count, false);
    if (augment(u, adj, match_right, visited)) ++matched;
  }
  // Dilworth: minimum chain cover = elements - maximum matching
  return count - matched;
}

}  // namespace limitgen
