#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "limitgen/adversaries.hpp"
#include "limitgen/density.hpp"
#include "limitgen/errors.hpp"
#include "limitgen/generators.hpp"

using namespace limitgen;

namespace {

/// K meet the intersection of the side languages indexed by the mask.
SetExpr masked_intersection(const HardInstance& inst, const SubsetMask& mask) {
  SetExpr acc = inst.target().expr();
  for (std::uint32_t j = 1; j <= mask.n; ++j)
    if (mask.contains(j))
      acc = set_intersection(acc, inst.collection.language(1 + j).expr());
  return acc;
}

}  // namespace

TEST_CASE("sperner instance shape and antichain reduction") {
  for (std::uint64_t k = 2; k <= 6; ++k) {
    HardInstance inst = sperner_hard_instance(k);
    CHECK(inst.collection.size() == k);
    CHECK(inst.certificate.width ==
          static_cast<std::uint64_t>(sperner_width(k - 1)));
    // partition exactness: cell counts sum to the horizon
    if (k > 2) {
      for (Nat horizon : {Nat(100), Nat(10'000)}) {
        Nat total = 0;
        for (const SetExpr& cell : inst.certificate.cells)
          total += cell.count_below(horizon);
        CHECK(total == horizon);
      }
    }
    // K meet the mask languages collapses to the matching cell
    for (std::size_t i = 0; i < inst.certificate.masks.size(); ++i) {
      SetExpr reduced = masked_intersection(inst, inst.certificate.masks[i]);
      CHECK(set_equal(reduced, inst.certificate.cells[i]));
    }
    // declared densities agree with exact counting at cell-aligned horizons
    if (k > 2) {
      std::uint64_t width = inst.certificate.width;
      const SetExpr& a1 = inst.certificate.cells[0];
      CHECK(a1.count_below(Nat(width) * 1000) == 1000);
      CHECK(*exact_upper_density(a1, inst.target()) == Ratio(1, width));
    }
  }
}

TEST_CASE("window instance: separator and reductions") {
  for (std::uint64_t k : {std::uint64_t{3}, std::uint64_t{5}, std::uint64_t{6}}) {
    HardInstance inst = window_hard_instance(k);
    std::uint64_t n = k - 1;
    std::uint64_t width = inst.certificate.width;
    const CellSystemPtr& sys = inst.certificate.system;
    SetExpr z = SetExpr::single_cell(sys, 0);
    CHECK(*exact_upper_density(z, inst.target()) == Ratio(0));
    // K meet all side languages is exactly the separator
    SetExpr all = inst.target().expr();
    for (std::uint64_t j = 1; j <= n; ++j)
      all = set_intersection(all, inst.collection.language(1 + j).expr());
    CHECK(set_equal(all, z));
    // K meet the mask languages is the cell plus the separator
    for (std::size_t i = 0; i < inst.certificate.masks.size(); ++i) {
      SetExpr reduced = masked_intersection(inst, inst.certificate.masks[i]);
      SetExpr expected = set_union(inst.certificate.cells[i], z);
      CHECK(set_equal(reduced, expected));
      CHECK(*exact_upper_density(reduced, inst.target()) == Ratio(1, width));
    }
    // partition: cells plus separator cover every horizon exactly
    for (Nat horizon : {Nat(64), Nat(10'000)}) {
      Nat total = 0;
      for (const SetExpr& cell : inst.certificate.cells)
        total += cell.count_below(horizon);
      CHECK(total == horizon);
    }
  }
}

TEST_CASE("window instance enumeration: stages with growing separator blocks") {
  HardInstance inst = window_hard_instance(3);
  REQUIRE(inst.fixed_enumeration);
  StreamPtr stream = inst.fixed_enumeration();
  const CellSystemPtr& sys = inst.certificate.system;
  // expected stage pattern: a_1^(1), one z, a_2^(1), one z, a_1^(2), two z, ...
  std::vector<std::size_t> expected_labels = {1, 0, 2, 0, 1, 0, 0, 2, 0, 0};
  std::set<Nat> seen;
  for (std::size_t label : expected_labels) {
    Nat x = stream->next();
    CHECK(sys->label(x) == label);
    CHECK(seen.insert(x).second);  // repetition-free
  }
  // the stream serves every width: stage r separator blocks have length r
  for (int more = 0; more < 500; ++more) CHECK(seen.insert(stream->next()).second);
}

TEST_CASE("zero density partition follows the block recurrence") {
  // s_t checkpoints: 1, 9, 99, 1699 and the identity 1+s_t=(1+t^2)(1+s_{t-1})
  CellSystemPtr sys = growing_block_system(2);
  std::vector<Nat> ends;
  Nat s = 0;
  for (Nat t = 1; t <= 8; ++t) {
    s += t * t * (1 + s);
    ends.push_back(s);
  }
  CHECK(ends[0] == 1);
  CHECK(ends[1] == 9);
  CHECK(ends[2] == 99);
  CHECK(ends[3] == 1699);
  Nat prev = 0;
  for (std::size_t t = 1; t <= ends.size(); ++t) {
    CHECK(1 + ends[t - 1] == (1 + Nat(t) * t) * (1 + prev));
    prev = ends[t - 1];
  }

  std::vector<SetExpr> bins = zero_density_partition(demo::naturals(), 2);
  REQUIRE(bins.size() == 2);
  // checkpoint bound: per-bin count at s_t is at most s_t/(1+t^2) off bins
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t t = 2; t <= 8; ++t) {
      bool own_block = (t - 1) % 2 == i;
      if (own_block) continue;
      Nat count = bins[i].count_below(ends[t - 1]);
      CHECK(count * (1 + Nat(t) * t) <= ends[t - 1]);
    }
  }
}

TEST_CASE("lower density instance is a partition with infinite bins") {
  HardInstance inst = lower_density_instance(3);
  CHECK(inst.collection.size() == 3);
  for (std::size_t i = 2; i <= 3; ++i)
    CHECK(finiteness(inst.collection.language(i).expr()).is_infinite());
  for (Nat horizon : {Nat(99), Nat(1699)}) {
    Nat total = 0;
    for (std::size_t i = 2; i <= 3; ++i)
      total += inst.collection.language(i).expr().count_below(horizon);
    CHECK(total == horizon);
  }
}

TEST_CASE("element adversary classifies the three proof cases") {
  Language evens = demo::evens();
  // shifts have unbounded image and tiny fibers
  ElementAdversary shift =
      element_memoryless_adversary([](const Nat& x) { return x + 2; }, evens);
  CHECK(shift.proof_case == 3);
  CHECK(!shift.planted_rounds.empty());
  // echo rules land in the bad set
  ElementAdversary echo =
      element_memoryless_adversary([](const Nat& x) { return x; }, evens);
  CHECK(echo.proof_case == 1);
  // constant rules have one heavy fiber
  ElementAdversary constant = element_memoryless_adversary(
      [](const Nat&) { return Nat(4); }, evens);
  CHECK(constant.proof_case == 2);
}

TEST_CASE("element adversary streams stay inside the target") {
  Language evens = demo::evens();
  ElementAdversary adv =
      element_memoryless_adversary([](const Nat& x) { return x + 2; }, evens);
  for (int i = 0; i < 400; ++i) CHECK(evens.contains(adv.stream->next()));
}

TEST_CASE("index pair instance and its pigeonhole adversary") {
  HardInstance inst = index_pair_instance();
  const SetExpr& c = inst.certificate.cells[0];
  CHECK(finiteness(c).is_infinite());
  // no containment either way
  CHECK(is_subset(inst.collection.language(1).expr(),
                  inst.collection.language(2).expr())
            .is_false());
  CHECK(is_subset(inst.collection.language(2).expr(),
                  inst.collection.language(1).expr())
            .is_false());
  // a rule constant on C gets the other language enumerated against it
  IndexAdversary adv =
      index_pair_adversary(inst, [](const Nat&) { return std::size_t{1}; });
  CHECK(adv.target_index == 2);
  const Language& target = inst.collection.language(adv.target_index);
  std::set<Nat> seen;
  for (int i = 0; i < 300; ++i) {
    Nat x = adv.stream->next();
    CHECK(target.contains(x));
    CHECK(seen.insert(x).second);
  }
}

TEST_CASE("identification and generation counterexample instances") {
  HardInstance prop = identification_counterexample();
  CHECK(prop.collection.size() == 3);
  CHECK(prop.collection.language(1).contains(1));
  CHECK_FALSE(prop.collection.language(2).contains(1));
  CHECK(prop.collection.language(3).contains(1));
  // pairwise finite symmetric differences
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t j = i + 1; j <= 3; ++j)
      CHECK(almost_compare(prop.collection.language(i),
                           prop.collection.language(j)) ==
            AlmostOrder::Equivalent);

  HardInstance gen = generation_counterexample();
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t j = 1; j <= 3; ++j) {
      if (i == j) continue;
      CHECK(is_subset(gen.collection.language(i).expr(),
                      gen.collection.language(j).expr())
                .is_false());
    }
  CHECK_THROWS_AS(generation_counterexample(Nat(1), Nat(1), Nat(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(generation_counterexample(Nat(3), Nat(1), Nat(2)),
                  std::invalid_argument);
}

TEST_CASE("staged window adversary: safe single-language rule") {
  Collection single = Collection::finite({demo::evens()});
  auto query = [&](const std::vector<Nat>& window) {
    return window_output(single, WindowStrategy::IntersectOverWindow, window);
  };
  WindowAdversary adv =
      window_staged_adversary(query, demo::evens(), 3, 4, 50);
  CHECK(adv.window_safe);
  CHECK(adv.tuples_probed >= 50);
}

TEST_CASE("staged window adversary: planted bad tuple is found and replayed") {
  // a rule that leaves the target whenever the window starts at a multiple
  // of ten
  auto query = [](const std::vector<Nat>& window) -> SetExpr {
    if (window.front() % 10 == 0)
      return SetExpr::single_cell(modular_system(2), 1);  // odds: not in evens
    return SetExpr::single_cell(modular_system(2), 0);
  };
  WindowAdversary adv = window_staged_adversary(query, demo::evens(), 2, 5, 100);
  REQUIRE_FALSE(adv.window_safe);
  REQUIRE(adv.planted_rounds.size() == 5);
  // replay: at each planted round the last two entries form a bad window
  std::vector<Nat> emitted;
  std::set<Nat> seen;
  for (std::uint64_t t = 1; t <= adv.planted_rounds.back(); ++t) {
    Nat x = adv.stream->next();
    CHECK(seen.insert(x).second);
    emitted.push_back(x);
  }
  for (std::uint64_t planted : adv.planted_rounds) {
    std::vector<Nat> window = {emitted[planted - 2], emitted[planted - 1]};
    SetExpr out = query(window);
    CHECK(is_subset(out, demo::evens().expr()).is_false());
  }
}
