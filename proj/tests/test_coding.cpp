#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "limitgen/coding.hpp"
#include "limitgen/errors.hpp"
#include "limitgen/stream.hpp"

using namespace limitgen;

TEST_CASE("cantor pairing basics") {
  CHECK(pair_encode(0, 0) == 0);
  CHECK(pair_encode(1, 1) == 4);  // (2*3)/2 + 1
  CHECK(pair_encode(2, 1) == 7);
  // fixed-u sections are unbounded
  Nat prev = pair_encode(9, 0);
  for (Nat n = 1; n < 40; ++n) {
    Nat cur = pair_encode(9, n);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("pairing round-trips, including large values") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    Nat u = rng() % 100'000, n = rng() % 100'000;
    auto [u2, n2] = pair_decode(pair_encode(u, n));
    REQUIRE(u2 == u);
    REQUIRE(n2 == n);
  }
  Nat big_u = Nat(1) << 600, big_n = (Nat(1) << 200) + 7;
  auto [bu, bn] = pair_decode(pair_encode(big_u, big_n));
  CHECK(bu == big_u);
  CHECK(bn == big_n);
}

TEST_CASE("sequence codes round-trip") {
  CHECK(seq_encode({}) == 0);
  std::vector<Nat> sample = {Nat(4), Nat(1), Nat(5)};
  CHECK(seq_decode(seq_encode(sample)) == sample);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Nat> xs;
    std::size_t len = rng() % 8;
    for (std::size_t i = 0; i < len; ++i) xs.push_back(rng() % 1000);
    REQUIRE(seq_decode(seq_encode(xs)) == xs);
  }
}

TEST_CASE("cofinal subsets: disjoint, inside, cofinal") {
  Collection coll =
      Collection::finite({demo::evens(), demo::naturals(), demo::multiples(3)});
  std::vector<SetExpr> subsets = cofinal_subsets(coll);
  REQUIRE(subsets.size() == 3);
  // each subset stays inside its language, and they are pairwise disjoint
  for (std::size_t i = 0; i < 3; ++i) {
    auto it = subsets[i].members();
    for (int step = 0; step < 100; ++step) {
      auto v = it.next();
      REQUIRE(v.has_value());
      CHECK(coll.language(i + 1).contains(*v));
      for (std::size_t j = 0; j < 3; ++j)
        if (j != i) CHECK_FALSE(subsets[j].contains(*v));
    }
  }
  // cofinality spot checks: a member above every probe point
  for (std::size_t i = 0; i < 3; ++i)
    for (Nat probe = 1; probe <= 100; ++probe) {
      bool above = false;
      auto it = subsets[i].members();
      for (int step = 0; step < 200 && !above; ++step) {
        auto v = it.next();
        REQUIRE(v.has_value());
        if (*v > probe) above = true;
      }
      CHECK(above);
    }
}

TEST_CASE("cofinal recursion on a single language") {
  Collection coll = Collection::finite({demo::naturals()});
  CofinalFamily family(coll);
  // c_{1,t} is the least unused element above t-1, which is t itself
  for (Nat t = 1; t <= 10; ++t) CHECK(family.element(1, t) == t);
}

TEST_CASE("cofinal family supports astronomically large positions") {
  Collection coll = Collection::finite({demo::evens(), demo::naturals()});
  CofinalFamily family(coll);
  REQUIRE(family.pattern_certified());
  Nat huge = (Nat(1) << 300) + 12345;
  Nat v1 = family.element(1, huge);
  Nat v2 = family.element(2, huge);
  CHECK(v1 != v2);
  auto [i1, m1] = family.locate(v1);
  CHECK(i1 == 1);
  CHECK(m1 == huge);
  auto [i2, m2] = family.locate(v2);
  CHECK(i2 == 2);
  CHECK(m2 == huge);
  CHECK_THROWS_AS(family.locate(Nat(0)), DecodeFailure);
}

TEST_CASE("coding generator produces increasing decodable outputs") {
  for (std::size_t target_index : {1, 2}) {
    Collection coll = Collection::finite({demo::evens(), demo::naturals()});
    const Language& target = coll.language(target_index);
    CodingGenerator gen(coll, default_probe_policy(), 24);
    CodingState st = gen.initial();
    StreamPtr stream = canonical_enumeration(target);
    std::vector<Nat> inputs;
    Nat prev = st.last_output;
    for (int round = 1; round <= 20; ++round) {
      Nat x = stream->next();
      inputs.push_back(x);
      auto [out, next] = gen.step(st, x);
      st = std::move(next);
      CHECK(out > prev);
      CHECK(out > x);
      REQUIRE(st.decoded_prefix == inputs);  // perfect prefix recovery
      prev = out;
    }
  }
}

TEST_CASE("coding generator round cap") {
  Collection coll = Collection::finite({demo::evens(), demo::naturals()});
  CodingGenerator gen(coll, default_probe_policy(), 3);
  CodingState st = gen.initial();
  StreamPtr stream = canonical_enumeration(coll.language(2));
  for (int round = 0; round < 3; ++round) {
    auto [out, next] = gen.step(st, stream->next());
    st = std::move(next);
  }
  CHECK_THROWS_AS(gen.step(st, stream->next()), SizeLimit);
}
