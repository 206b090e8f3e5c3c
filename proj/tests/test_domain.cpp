#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "limitgen/density.hpp"
#include "limitgen/errors.hpp"
#include "limitgen/language.hpp"
#include "limitgen/serialize.hpp"

using namespace limitgen;

namespace {

SetExpr evens_expr() { return SetExpr::single_cell(modular_system(2), 0); }
SetExpr odds_expr() { return SetExpr::single_cell(modular_system(2), 1); }

Collection prop51_collection() {
  CellSystemPtr sys = modular_system(3);
  Language l1(SetExpr::structured(sys, {0}, {Nat(1)}));
  Language l2(SetExpr::structured(sys, {0}, {Nat(2)}));
  Language l3(SetExpr::structured(sys, {0}, {Nat(1), Nat(2)}));
  return Collection::finite({l1, l2, l3});
}

}  // namespace

TEST_CASE("membership over cells and corrections") {
  SetExpr evens = evens_expr();
  CHECK(evens.contains(4));
  CHECK_FALSE(evens.contains(7));
  // C + {1} with C the multiples of three
  SetExpr cu1 = SetExpr::structured(modular_system(3), {0}, {Nat(1)});
  CHECK(cu1.contains(1));
  CHECK(cu1.contains(6));
  CHECK_FALSE(cu1.contains(2));
}

TEST_CASE("nth_element follows canonical order") {
  SetExpr evens = evens_expr();
  CHECK(evens.nth_element(1) == 0);
  CHECK(evens.nth_element(3) == 4);
  SetExpr c = SetExpr::single_cell(modular_system(3), 0);
  CHECK(c.nth_element(2) == 3);
  SetExpr singleton = SetExpr::finite_set({Nat(0)});
  CHECK(singleton.nth_element(1) == 0);
  CHECK_THROWS_AS(singleton.nth_element(2), OutOfRange);
}

TEST_CASE("enumerator and membership agree and increase strictly") {
  std::vector<SetExpr> corpus = {
      evens_expr(),
      SetExpr::structured(modular_system(3), {0, 2}, {Nat(1)}, {Nat(0)}),
      SetExpr::single_cell(power_separated_system(2), 0),
      SetExpr::single_cell(power_separated_system(2), 1),
      SetExpr::single_cell(growing_block_system(2), 1),
      opaque_builtin("squares", {}),
  };
  for (const SetExpr& s : corpus) {
    auto it = s.members();
    Nat prev = -1;
    for (int i = 0; i < 200; ++i) {
      auto v = it.next();
      REQUIRE(v.has_value());
      CHECK(*v > prev);
      CHECK(s.contains(*v));
      prev = *v;
    }
  }
}

TEST_CASE("same-system boolean algebra is exact") {
  SetExpr evens = evens_expr();
  SetExpr nats = SetExpr::full_domain(modular_system(2));
  CHECK(set_equal(set_intersection(evens, nats), evens));

  CellSystemPtr mod4 = modular_system(4);
  SetExpr l1 = SetExpr::structured(mod4, {0, 1});
  SetExpr l2 = SetExpr::structured(mod4, {0, 2});
  CHECK(set_equal(set_intersection(l1, l2), SetExpr::single_cell(mod4, 0)));

  CellSystemPtr mod3 = modular_system(3);
  SetExpr cu1 = SetExpr::structured(mod3, {0}, {Nat(1)});
  SetExpr cu2 = SetExpr::structured(mod3, {0}, {Nat(2)});
  CHECK(set_equal(set_intersection(cu1, cu2), SetExpr::single_cell(mod3, 0)));
}

TEST_CASE("boolean algebra associativity by membership agreement") {
  std::mt19937_64 rng(7);
  CellSystemPtr sys = modular_system(6);
  auto random_set = [&]() {
    std::vector<std::size_t> cells;
    for (std::size_t c = 0; c < 6; ++c)
      if (rng() & 1) cells.push_back(c);
    std::vector<Nat> plus, minus;
    for (int i = 0; i < 3; ++i) {
      Nat v = rng() % 300;
      bool in_cells = std::find(cells.begin(), cells.end(),
                                sys->label(v)) != cells.end();
      if (in_cells)
        minus.push_back(v);
      else
        plus.push_back(v);
    }
    return SetExpr::structured(sys, cells, plus, minus);
  };
  for (int trial = 0; trial < 20; ++trial) {
    SetExpr a = random_set(), b = random_set(), c = random_set();
    SetExpr left = set_intersection(set_intersection(a, b), c);
    SetExpr right = set_intersection(a, set_intersection(b, c));
    SetExpr mixed = set_union(set_difference(a, b), set_intersection(b, c));
    for (Nat v = 0; v < 10'000; ++v) {
      bool expect = a.contains(v) && b.contains(v) && c.contains(v);
      REQUIRE(left.contains(v) == expect);
      REQUIRE(right.contains(v) == expect);
      bool expect_mixed = (a.contains(v) && !b.contains(v)) ||
                          (b.contains(v) && c.contains(v));
      REQUIRE(mixed.contains(v) == expect_mixed);
    }
  }
}

TEST_CASE("subset verdicts") {
  SetExpr evens = evens_expr();
  SetExpr nats = SetExpr::full_domain(modular_system(2));
  CHECK(is_subset(evens, nats).is_true());
  SubsetVerdict v = is_subset(nats, evens);
  CHECK(v.is_false());
  CHECK(*v.witness == 1);
}

TEST_CASE("finiteness verdicts are exact for structured sets") {
  CHECK(finiteness(evens_expr()).is_infinite());
  FinitenessVerdict single = finiteness(SetExpr::finite_set({Nat(0)}));
  REQUIRE(single.is_finite());
  CHECK(single.elements == std::vector<Nat>{Nat(0)});
  // evens meet odds+{0}
  SetExpr odds0 = SetExpr::structured(modular_system(2), {1}, {Nat(0)});
  FinitenessVerdict meet = finiteness(set_intersection(evens_expr(), odds0));
  REQUIRE(meet.is_finite());
  CHECK(meet.elements == std::vector<Nat>{Nat(0)});
}

TEST_CASE("count additivity across a cell partition") {
  CellSystemPtr sys = modular_system(5);
  for (Nat horizon : {Nat(16), Nat(100), Nat(12345)}) {
    Nat total = 0;
    for (std::size_t c = 0; c < 5; ++c)
      total += SetExpr::single_cell(sys, c).count_below(horizon);
    CHECK(total == horizon);
  }
  CellSystemPtr blocks = growing_block_system(3);
  for (Nat horizon : {Nat(99), Nat(1699), Nat(44199), Nat(5'315'049'999ULL)}) {
    Nat total = 0;
    for (std::size_t c = 0; c < 3; ++c)
      total += SetExpr::single_cell(blocks, c).count_below(horizon);
    CHECK(total == horizon);
  }
}

TEST_CASE("signatures over the three-language instance") {
  Collection coll = prop51_collection();
  CHECK(signature(coll, 1) == std::vector<std::size_t>{1, 3});
  CHECK(signature(coll, 3) == std::vector<std::size_t>{1, 2, 3});
  CHECK(signature(coll, 5).empty());

  SetExpr i1 = signature_intersection(coll, 1);
  CHECK(set_equal(i1, SetExpr::structured(modular_system(3), {0}, {Nat(1)})));
  SetExpr i3 = signature_intersection(coll, 3);
  CHECK(set_equal(i3, SetExpr::single_cell(modular_system(3), 0)));
  CHECK_THROWS_AS(signature_intersection(coll, 5), EmptySignature);
}

TEST_CASE("empirical density counts exactly") {
  Language nats = demo::naturals();
  DensityEstimate est = empirical_density(evens_expr(), nats,
                                          {Nat(10), Nat(100), Nat(1000)}, 0.0);
  for (const Ratio& r : est.ratios) CHECK(r == Ratio(1, 2));
  CHECK(est.upper_est == Ratio(1, 2));
  CHECK(est.lower_est == Ratio(1, 2));

  DensityEstimate self = empirical_density(nats.expr(), nats, {Nat(16), Nat(64)});
  CHECK(self.upper_est == 1);
  CHECK(self.lower_est == 1);
}

TEST_CASE("alternating factorial blocks split the two densities") {
  SetExpr blocks = opaque_builtin("factorial_blocks", {});
  // oracle: direct membership count at factorial horizons
  std::vector<Nat> horizons = {Nat(6),    Nat(24),   Nat(120),
                               Nat(720),  Nat(5040), Nat(40320),
                               Nat(362880)};
  std::vector<Nat> counts(horizons.size(), Nat(0));
  Nat c = 0;
  for (Nat v = 0; v < horizons.back(); ++v) {
    if (blocks.contains(v)) ++c;
    for (std::size_t h = 0; h < horizons.size(); ++h)
      if (v + 1 == horizons[h]) counts[h] = c;
  }
  DensityEstimate est =
      empirical_density(blocks, demo::naturals(), horizons, 0.0);
  for (std::size_t h = 0; h < horizons.size(); ++h)
    CHECK(est.ratios[h] == Ratio(counts[h], horizons[h]));
  CHECK(est.lower_est <= Ratio(1, 6));
  CHECK(est.upper_est >= Ratio(7, 8));
}

TEST_CASE("exact upper density from declared cells") {
  CellSystemPtr sys = modular_system(6);
  Language k(SetExpr::full_domain(sys));
  CHECK(*exact_upper_density(SetExpr::single_cell(sys, 2), k) == Ratio(1, 6));
  CHECK(*exact_upper_density(k.expr(), k) == Ratio(1));

  CellSystemPtr win = power_separated_system(2);
  Language wk(SetExpr::full_domain(win));
  CHECK(*exact_upper_density(SetExpr::single_cell(win, 0), wk) == Ratio(0));
  CHECK(*exact_upper_density(SetExpr::structured(win, {0, 1}), wk) ==
        Ratio(1, 2));
}

TEST_CASE("almost-containment order") {
  Language evens = demo::evens();
  Language odds = demo::odds();
  Language nats = demo::naturals();
  CHECK(almost_compare(evens, nats) == AlmostOrder::LeftBelow);
  CHECK(almost_compare(nats, evens) == AlmostOrder::RightBelow);
  CHECK(almost_compare(evens, evens) == AlmostOrder::Equivalent);
  CHECK(almost_compare(evens, odds) == AlmostOrder::Incomparable);
}

TEST_CASE("strict almost-containment is transitive on the corpus") {
  std::vector<Language> corpus = {
      demo::naturals(), demo::evens(), demo::odds(), demo::odds_with_zero(),
      Language(SetExpr::structured(modular_system(2), {0}, {Nat(1)}, {Nat(0)})),
      demo::multiples(4)};
  auto below = [&](const Language& a, const Language& b) {
    return almost_compare(a, b) == AlmostOrder::LeftBelow;
  };
  for (const Language& a : corpus)
    for (const Language& b : corpus)
      for (const Language& c : corpus)
        if (below(a, b) && below(b, c)) CHECK(below(a, c));
}

TEST_CASE("density estimates stay ordered and bounded") {
  std::mt19937_64 rng(11);
  CellSystemPtr sys = modular_system(8);
  Language k(SetExpr::full_domain(sys));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::size_t> cells;
    for (std::size_t c = 0; c < 8; ++c)
      if (rng() & 1) cells.push_back(c);
    SetExpr s = SetExpr::structured(sys, cells);
    DensityEstimate est =
        empirical_density(s, k, {Nat(16), Nat(64), Nat(256), Nat(1024)});
    CHECK(est.lower_est <= est.upper_est);
    CHECK(est.lower_est >= 0);
    CHECK(est.upper_est <= 1);
  }
}

TEST_CASE("probe-based verdicts for opaque sets") {
  SetExpr squares = opaque_builtin("squares", {});
  CHECK(finiteness(squares).is_infinite());
  SetExpr mult3 = opaque_builtin("multiples", {{"of", 3}});
  SubsetVerdict v = is_subset(mult3, SetExpr::single_cell(modular_system(3), 0));
  CHECK_FALSE(v.is_false());  // all multiples really lie in the cell
  SubsetVerdict w = is_subset(squares, evens_expr());
  CHECK(w.is_false());
  CHECK(*w.witness == 1);
}

TEST_CASE("cross-system intersection refines into a product") {
  SetExpr evens = evens_expr();
  SetExpr mult3 = SetExpr::single_cell(modular_system(3), 0);
  SetExpr both = set_intersection(evens, mult3);
  for (Nat v = 0; v < 600; ++v)
    REQUIRE(both.contains(v) == (v % 6 == 0));
  CHECK(finiteness(both).is_infinite());
}

TEST_CASE("json round-trip for structured and registered opaque sets") {
  SetExpr original =
      SetExpr::structured(modular_system(4), {0, 3}, {Nat(5)}, {Nat(4)});
  SetExpr reloaded = set_from_json(to_json(original));
  CHECK(set_equal(original, reloaded));

  SetExpr squares = opaque_builtin("squares", {});
  SetExpr squares2 = set_from_json(to_json(squares));
  for (Nat v = 0; v < 200; ++v)
    REQUIRE(squares.contains(v) == squares2.contains(v));

  SetExpr anonymous = set_intersection(squares, evens_expr());
  CHECK_THROWS_AS(to_json(anonymous), ConfigError);
}

TEST_CASE("collection json round-trip") {
  Collection coll = prop51_collection();
  Collection reloaded = collection_from_json(to_json(coll));
  REQUIRE(reloaded.size() == 3);
  for (std::size_t i = 1; i <= 3; ++i)
    CHECK(set_equal(coll.language(i).expr(), reloaded.language(i).expr()));
}

TEST_CASE("languages must be infinite") {
  CHECK_THROWS_AS(Language(SetExpr::finite_set({Nat(1), Nat(2)})),
                  std::invalid_argument);
}

TEST_CASE("corrections respect the size cap") {
  std::vector<Nat> many;
  for (std::uint64_t i = 0; i < 10'001; ++i) many.push_back(Nat(2 * i + 1));
  CHECK_THROWS_AS(SetExpr::structured(modular_system(2), {0}, many), SizeLimit);
}
