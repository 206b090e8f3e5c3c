#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "limitgen/combinatorics.hpp"
#include "limitgen/errors.hpp"

using namespace limitgen;

TEST_CASE("sperner width values") {
  CHECK(sperner_width(0) == 1);
  CHECK(sperner_width(2) == 2);
  CHECK(sperner_width(4) == 6);
  CHECK(sperner_width(9) == 126);  // C(9,4)
  // monotone in z
  for (std::uint64_t z = 0; z < 64; ++z)
    CHECK(sperner_width(z + 1) >= sperner_width(z));
}

TEST_CASE("middle layer masks") {
  auto two = middle_layer(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].bits == 0b01);
  CHECK(two[1].bits == 0b10);
  auto three = middle_layer(3);
  REQUIRE(three.size() == 3);
  for (const SubsetMask& m : three) CHECK(m.size() == 1);
  CHECK(middle_layer(4).size() == 6);
}

TEST_CASE("middle layer is a maximum antichain (exhaustive oracle, n <= 6)") {
  for (std::uint32_t n = 1; n <= 6; ++n) {
    auto layer = middle_layer(n);
    for (const SubsetMask& a : layer)
      for (const SubsetMask& b : layer)
        if (!(a == b)) {
          CHECK_FALSE(a.subset_of(b));
          CHECK_FALSE(b.subset_of(a));
        }
    CHECK(lattice_width_by_matching(n) == layer.size());
    CHECK(Nat(layer.size()) == sperner_width(n));
  }
}

TEST_CASE("random oversize families always contain a comparable pair") {
  std::mt19937_64 rng(3);
  for (std::uint32_t n = 7; n <= 12; ++n) {
    std::uint64_t width = static_cast<std::uint64_t>(sperner_width(n));
    std::uint64_t trials = 100'000 / (n * n);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      std::set<std::uint32_t> family;
      while (family.size() <= width) family.insert(rng() & ((1u << n) - 1));
      bool comparable = false;
      for (auto it = family.begin(); it != family.end() && !comparable; ++it)
        for (auto jt = std::next(it); jt != family.end(); ++jt)
          if ((*it & ~*jt) == 0 || (*jt & ~*it) == 0) {
            comparable = true;
            break;
          }
      CHECK(comparable);
    }
  }
}

namespace {

void check_decomposition(const ChainDecomposition& scd) {
  std::uint32_t n = scd.n;
  CHECK(Nat(scd.chains.size()) == sperner_width(n));
  std::set<std::uint32_t> seen;
  for (const auto& chain : scd.chains) {
    REQUIRE(!chain.empty());
    for (std::size_t i = 0; i < chain.size(); ++i) {
      CHECK(seen.insert(chain[i].bits).second);
      if (i > 0) {
        // one element added per step
        CHECK(chain[i - 1].subset_of(chain[i]));
        CHECK(chain[i].size() == chain[i - 1].size() + 1);
      }
    }
    CHECK(chain.front().size() + chain.back().size() == n);
  }
  CHECK(seen.size() == (1u << n));
}

}  // namespace

TEST_CASE("symmetric chain decomposition invariants for n <= 12") {
  for (std::uint32_t n = 1; n <= 12; ++n)
    check_decomposition(symmetric_chain_decomposition(n));
  CHECK_THROWS_AS(symmetric_chain_decomposition(21), SizeLimit);
}

TEST_CASE("small decompositions match the bracketing rule") {
  auto one = symmetric_chain_decomposition(1);
  REQUIRE(one.chains.size() == 1);
  CHECK(one.chains[0][0].bits == 0);
  CHECK(one.chains[0][1].bits == 1);

  auto two = symmetric_chain_decomposition(2);
  REQUIRE(two.chains.size() == 2);
  CHECK(two.chains[0][0].bits == 0b00);
  CHECK(two.chains[0][1].bits == 0b01);
  CHECK(two.chains[0][2].bits == 0b11);
  CHECK(two.chains[1][0].bits == 0b10);

  auto three = symmetric_chain_decomposition(3);
  std::multiset<std::size_t> sizes;
  for (const auto& chain : three.chains) sizes.insert(chain.size());
  CHECK(sizes == std::multiset<std::size_t>{2, 2, 4});
}

TEST_CASE("minimax closed forms") {
  CHECK(minimax_memoryless(1) == 1);
  CHECK(minimax_memoryless(3) == Ratio(1, 2));
  CHECK(minimax_memoryless(6) == Ratio(1, 10));

  CHECK(minimax_buffer(5, 3) == 1);
  CHECK(minimax_buffer(5, 1) == Ratio(1, 3));
  CHECK(minimax_buffer(5, 0) == Ratio(1, 6));
  CHECK(minimax_buffer(5, 0) == minimax_memoryless(5));
  for (std::uint64_t k = 1; k <= 64; ++k)
    CHECK(minimax_buffer(k, 0) == minimax_memoryless(k));

  CHECK(buffer_improvement_ratio(5, 1) == Ratio(2));
}
