#include "limitgen/adversaries.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "limitgen/errors.hpp"
#include "limitgen/set_expr.hpp"

namespace limitgen {

namespace {

/// Stream driven by a generator closure.
class FnStream final : public EnumerationStream {
 public:
  FnStream(std::function<Nat()> fn, RepetitionPolicy policy,
           std::uint64_t deadline_factor,
           std::optional<std::uint64_t> cap = std::nullopt)
      : fn_(std::move(fn)), factor_(deadline_factor) {
    policy_ = policy;
    cap_ = cap;
  }
  Nat next() override { return fn_(); }
  std::uint64_t coverage_deadline(std::uint64_t n) const override {
    return factor_ * n;
  }

 private:
  std::function<Nat()> fn_;
  std::uint64_t factor_;
};

}  // namespace

HardInstance sperner_hard_instance(std::uint64_t k) {
  if (k < 2) throw std::invalid_argument("sperner_hard_instance: k must be >= 2");
  if (k == 2) {
    // Degenerate regime: the bound is 1 and one almost-full side language
    // attains it at every sample.
    CellSystemPtr system = trivial_system();
    Language target(SetExpr::full_domain(system));
    Language side(SetExpr::structured(system, {0}, {}, {Nat(0)}));
    HardInstance inst{Collection::finite({target, side})};
    inst.certificate.kind = "sperner";
    inst.certificate.k = 2;
    inst.certificate.n = 1;
    inst.certificate.width = 1;
    inst.certificate.masks = {SubsetMask{1, 1}};
    inst.certificate.system = system;
    inst.certificate.cells = {side.expr()};
    return inst;
  }
  std::uint64_t n = k - 1;
  std::uint64_t width = static_cast<std::uint64_t>(sperner_width(n));
  CellSystemPtr system = modular_system(width);
  std::vector<SubsetMask> masks = middle_layer(static_cast<std::uint32_t>(n));
  std::vector<Language> languages;
  languages.emplace_back(SetExpr::full_domain(system));
  for (std::uint32_t j = 1; j <= n; ++j) {
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < masks.size(); ++i)
      if (masks[i].contains(j)) cells.push_back(i);
    languages.emplace_back(SetExpr::structured(system, std::move(cells)));
  }
  HardInstance inst{Collection::finite(std::move(languages))};
  inst.certificate.kind = "sperner";
  inst.certificate.k = k;
  inst.certificate.n = n;
  inst.certificate.width = width;
  inst.certificate.masks = std::move(masks);
  inst.certificate.system = system;
  for (std::size_t i = 0; i < width; ++i)
    inst.certificate.cells.push_back(SetExpr::single_cell(system, i));
  return inst;
}

namespace {

/// Stage-by-stage enumeration of the window instance: a_1^(r), r separator
/// points, a_2^(r), r separator points, ..., for r = 1, 2, ...
class WindowInstanceStream final : public EnumerationStream {
 public:
  WindowInstanceStream(CellSystemPtr system, std::uint64_t cell_count)
      : system_(std::move(system)), cells_(cell_count) {
    policy_ = RepetitionPolicy::RepetitionFree;
    cap_ = 1;
  }
  Nat next() override {
    if (phase_ == 0) {
      Nat v = system_->cell_nth(cell_ + 1, Nat(stage_));
      phase_ = 1;
      return v;
    }
    Nat v = system_->cell_nth(0, Nat(++z_cursor_));
    if (++z_in_block_ == stage_) {
      z_in_block_ = 0;
      phase_ = 0;
      if (++cell_ == cells_) {
        cell_ = 0;
        ++stage_;
      }
    }
    return v;
  }
  std::uint64_t coverage_deadline(std::uint64_t n) const override {
    // the n-th canonical element appears by the end of stage n
    return cells_ * n * (n + 3) / 2 + cells_ * n;
  }

 private:
  CellSystemPtr system_;
  std::uint64_t cells_;
  std::uint64_t stage_ = 1;
  std::uint64_t cell_ = 0;     // 0-based index among the positive cells
  int phase_ = 0;              // 0: emit cell point, 1: emit separator block
  std::uint64_t z_in_block_ = 0;
  std::uint64_t z_cursor_ = 0;
};

}  // namespace

HardInstance window_hard_instance(std::uint64_t k) {
  if (k < 2) throw std::invalid_argument("window_hard_instance: k must be >= 2");
  std::uint64_t n = k - 1;
  std::uint64_t width = static_cast<std::uint64_t>(sperner_width(n));
  CellSystemPtr system = power_separated_system(width);
  std::vector<SubsetMask> masks = middle_layer(static_cast<std::uint32_t>(n));
  std::vector<Language> languages;
  languages.emplace_back(SetExpr::full_domain(system));
  for (std::uint32_t j = 1; j <= n; ++j) {
    std::vector<std::size_t> cells = {0};  // every side language holds Z
    for (std::size_t i = 0; i < masks.size(); ++i)
      if (masks[i].contains(j)) cells.push_back(i + 1);
    languages.emplace_back(SetExpr::structured(system, std::move(cells)));
  }
  HardInstance inst{Collection::finite(std::move(languages))};
  inst.target_index = 1;
  inst.fixed_enumeration = [system, width]() -> StreamPtr {
    return std::make_unique<WindowInstanceStream>(system, width);
  };
  inst.certificate.kind = "window";
  inst.certificate.k = k;
  inst.certificate.n = n;
  inst.certificate.width = width;
  inst.certificate.masks = std::move(masks);
  inst.certificate.system = system;
  for (std::size_t i = 1; i <= width; ++i)
    inst.certificate.cells.push_back(SetExpr::single_cell(system, i));
  inst.certificate.cells.push_back(SetExpr::single_cell(system, 0));  // Z last
  return inst;
}

std::vector<SetExpr> zero_density_partition(const Language& k, std::uint64_t m) {
  if (m < 2)
    throw std::invalid_argument("zero_density_partition: m must be >= 2");
  if (!k.expr().is_full_domain())
    throw std::invalid_argument(
        "zero_density_partition: only the full domain is supported");
  CellSystemPtr system = growing_block_system(m);
  std::vector<SetExpr> bins;
  for (std::size_t i = 0; i < m; ++i)
    bins.push_back(SetExpr::single_cell(system, i));
  return bins;
}

HardInstance lower_density_instance(std::uint64_t k) {
  if (k < 3) throw std::invalid_argument("lower_density_instance: k must be >= 3");
  std::uint64_t m = k - 1;
  CellSystemPtr system = growing_block_system(m);
  std::vector<Language> languages;
  languages.emplace_back(SetExpr::full_domain(system));
  for (std::size_t i = 0; i < m; ++i)
    languages.emplace_back(SetExpr::single_cell(system, i));
  HardInstance inst{Collection::finite(std::move(languages))};
  inst.target_index = 1;
  inst.certificate.kind = "lower_density";
  inst.certificate.k = k;
  inst.certificate.n = m;
  inst.certificate.system = system;
  for (std::size_t i = 0; i < m; ++i)
    inst.certificate.cells.push_back(SetExpr::single_cell(system, i));
  return inst;
}

HardInstance index_pair_instance() {
  CellSystemPtr system = modular_system(4);
  Language l1(SetExpr::structured(system, {0, 1}));
  Language l2(SetExpr::structured(system, {0, 2}));
  HardInstance inst{Collection::finite({l1, l2})};
  inst.target_index = 2;
  inst.certificate.kind = "index_pair";
  inst.certificate.k = 2;
  inst.certificate.system = system;
  inst.certificate.cells = {SetExpr::single_cell(system, 0)};  // C
  return inst;
}

HardInstance identification_counterexample() {
  CellSystemPtr system = modular_system(3);
  Language l1(SetExpr::structured(system, {0}, {Nat(1)}));
  Language l2(SetExpr::structured(system, {0}, {Nat(2)}));
  Language l3(SetExpr::structured(system, {0}, {Nat(1), Nat(2)}));
  HardInstance inst{Collection::finite({l1, l2, l3})};
  inst.target_index = 3;
  inst.certificate.kind = "prop5.1";
  inst.certificate.k = 3;
  inst.certificate.system = system;
  DistinguishingTexts texts{{Nat(1), Nat(2)},
                            Language(SetExpr::single_cell(system, 0))};
  texts.prefixes = {{}, {Nat(1)}, {Nat(2)}, {Nat(1), Nat(2)}};
  texts.suffixes = {{}, {Nat(2)}, {Nat(1)}};
  inst.texts = std::move(texts);
  return inst;
}

HardInstance generation_counterexample(Nat a, Nat b, Nat c) {
  CellSystemPtr system = modular_system(3);
  SetExpr base_expr = SetExpr::structured(system, {0}, {}, {Nat(0)});
  Language base(base_expr);
  std::vector<Nat> symbols = {a, b, c};
  std::set<Nat> distinct(symbols.begin(), symbols.end());
  if (distinct.size() != 3)
    throw std::invalid_argument("generation_counterexample: a, b, c must differ");
  for (const Nat& s : symbols)
    if (base.contains(s))
      throw std::invalid_argument(
          "generation_counterexample: symbols must avoid the base set");
  auto with = [&](const Nat& x, const Nat& y) {
    return Language(set_union(base_expr, SetExpr::finite_set({x, y})));
  };
  HardInstance inst{Collection::finite({with(a, b), with(a, c), with(b, c)})};
  inst.target_index = 3;
  inst.certificate.kind = "propA.2";
  inst.certificate.k = 3;
  inst.certificate.system = system;
  DistinguishingTexts texts{symbols, base};
  // the impossibility argument only needs symbol words of length <= 3
  texts.prefixes.push_back({});
  for (const Nat& x : symbols) texts.prefixes.push_back({x});
  for (const Nat& x : symbols)
    for (const Nat& y : symbols) texts.prefixes.push_back({x, y});
  for (const Nat& x : symbols)
    for (const Nat& y : symbols)
      for (const Nat& z : symbols) texts.prefixes.push_back({x, y, z});
  texts.suffixes = {{}, {a}, {b}, {c}};
  inst.texts = std::move(texts);
  return inst;
}

ElementAdversary element_memoryless_adversary(
    const std::function<Nat(const Nat&)>& g, const Language& k,
    const ProbePolicy& policy) {
  std::vector<Nat> probed;
  {
    auto it = k.members();
    while (probed.size() < 4 * policy.witness_count) {
      std::optional<Nat> v = it.next();
      if (!v || *v >= policy.horizon) break;
      probed.push_back(*v);
    }
  }
  std::vector<Nat> bad;  // invalid image or echoes its input
  for (const Nat& x : probed)
    if (g(x) == x || !k.contains(g(x))) bad.push_back(x);

  ElementAdversary out;
  std::vector<Nat> script;
  auto canon = std::make_shared<SetExpr::MemberIterator>(k.members());
  auto tail = [canon]() {
    std::optional<Nat> v = canon->next();
    if (!v) throw ProbeExhausted("element adversary: target exhausted");
    return *v;
  };

  if (bad.size() >= policy.witness_count) {
    out.proof_case = 1;
    for (std::size_t i = 0; i < bad.size(); ++i) {
      script.push_back(bad[i]);
      out.planted_rounds.push_back(script.size());
      script.push_back(tail());
    }
  } else {
    std::vector<Nat> good;
    for (const Nat& x : probed)
      if (std::find(bad.begin(), bad.end(), x) == bad.end()) good.push_back(x);
    std::map<Nat, std::vector<Nat>> fibers;
    for (const Nat& x : good) fibers[g(x)].push_back(x);
    const std::vector<Nat>* heavy = nullptr;
    Nat heavy_y;
    for (const auto& [y, xs] : fibers)
      if (xs.size() >= policy.witness_count) {
        heavy = &xs;
        heavy_y = y;
        break;
      }
    if (heavy) {
      out.proof_case = 2;
      script.push_back(heavy_y);
      for (const Nat& x : *heavy) {
        script.push_back(x);
        out.planted_rounds.push_back(script.size());
        script.push_back(tail());
      }
    } else {
      // distinct images: every fiber is small, so the image is large
      std::vector<Nat> reps;
      std::set<Nat> images;
      for (const Nat& x : good)
        if (images.insert(g(x)).second) reps.push_back(x);
      if (reps.size() < policy.witness_count)
        throw CaseUndetermined(
            "element adversary: no proof case certified within the probe budget");
      out.proof_case = 3;
      for (const Nat& x : reps) {
        script.push_back(g(x));
        script.push_back(x);
        out.planted_rounds.push_back(script.size());
        script.push_back(tail());
      }
    }
  }
  auto pos = std::make_shared<std::size_t>(0);
  auto scripted = std::make_shared<std::vector<Nat>>(std::move(script));
  out.stream = std::make_unique<FnStream>(
      [pos, scripted, tail]() {
        if (*pos < scripted->size()) return (*scripted)[(*pos)++];
        return tail();
      },
      RepetitionPolicy::FinitelyRepeating, 3, 3);
  return out;
}

IndexAdversary index_pair_adversary(
    const HardInstance& instance,
    const std::function<std::size_t(const Nat&)>& rule,
    const ProbePolicy& policy) {
  const SetExpr& common = instance.certificate.cells.at(0);
  std::vector<Nat> mono[3];
  auto it = common.members();
  for (std::uint64_t probes = 0; probes < 4 * policy.witness_count; ++probes) {
    std::optional<Nat> v = it.next();
    if (!v) break;
    std::size_t answer = rule(*v);
    if (answer != 1 && answer != 2)
      throw std::invalid_argument("index rule must answer 1 or 2");
    mono[answer].push_back(*v);
    if (mono[answer].size() >= policy.witness_count) break;
  }
  std::size_t heavy = mono[1].size() >= policy.witness_count ? 1
                      : mono[2].size() >= policy.witness_count ? 2
                                                               : 0;
  if (heavy == 0)
    throw CaseUndetermined("index adversary: no monochromatic side certified");
  IndexAdversary out;
  out.target_index = 3 - heavy;  // enumerate the language the rule ignores
  const Language& target = instance.collection.language(out.target_index);
  std::vector<Nat> script;
  auto canon = std::make_shared<SetExpr::MemberIterator>(target.members());
  auto used_ptr = std::make_shared<std::set<Nat>>();
  auto tail = [canon, used_ptr]() {
    for (;;) {
      std::optional<Nat> v = canon->next();
      if (!v) throw ProbeExhausted("index adversary: target exhausted");
      if (!used_ptr->count(*v)) return *v;
    }
  };
  for (const Nat& a : mono[heavy]) {
    script.push_back(a);
    used_ptr->insert(a);
    out.planted_rounds.push_back(script.size());
    script.push_back(tail());
  }
  auto pos = std::make_shared<std::size_t>(0);
  auto scripted = std::make_shared<std::vector<Nat>>(std::move(script));
  out.stream = std::make_unique<FnStream>(
      [pos, scripted, tail]() {
        if (*pos < scripted->size()) return (*scripted)[(*pos)++];
        return tail();
      },
      RepetitionPolicy::RepetitionFree, 2, 1);
  return out;
}

WindowAdversary window_staged_adversary(
    const std::function<SetExpr(const std::vector<Nat>&)>& query,
    const Language& language, std::uint64_t width, std::uint64_t stages,
    std::uint64_t tuple_budget, const ProbePolicy& policy) {
  WindowAdversary out;
  std::deque<Nat> pending;  // peeked elements not yet emitted
  auto it = language.members();
  auto peek_upto = [&](std::size_t count) {
    while (pending.size() < count) {
      std::optional<Nat> v = it.next();
      if (!v) throw ProbeExhausted("window adversary: target exhausted");
      pending.push_back(*v);
    }
  };
  std::vector<Nat> script;
  for (std::uint64_t s = 0; s < stages; ++s) {
    peek_upto(1);
    script.push_back(pending.front());  // u_s: first unused target element
    pending.pop_front();
    bool found = false;
    for (std::uint64_t j = 0; j + 1 <= tuple_budget && !found; ++j) {
      peek_upto(j + width);
      std::vector<Nat> tuple(pending.begin() + j, pending.begin() + j + width);
      ++out.tuples_probed;
      SubsetVerdict v = is_subset(query(tuple), language.expr(), policy);
      if (v.is_false()) {
        found = true;
        for (const Nat& t : tuple) script.push_back(t);
        out.planted_rounds.push_back(script.size());
        pending.erase(pending.begin() + j, pending.begin() + j + width);
      }
    }
    if (!found) {
      out.window_safe = true;
      return out;
    }
  }
  // remaining pending elements flow out first, then the canonical tail
  auto rest = std::make_shared<std::deque<Nat>>(std::move(pending));
  auto canon = std::make_shared<SetExpr::MemberIterator>(std::move(it));
  auto pos = std::make_shared<std::size_t>(0);
  auto scripted = std::make_shared<std::vector<Nat>>(std::move(script));
  out.stream = std::make_unique<FnStream>(
      [pos, scripted, rest, canon]() {
        if (*pos < scripted->size()) return (*scripted)[(*pos)++];
        if (!rest->empty()) {
          Nat v = rest->front();
          rest->pop_front();
          return v;
        }
        std::optional<Nat> v = canon->next();
        if (!v) throw ProbeExhausted("window adversary: target exhausted");
        return *v;
      },
      RepetitionPolicy::RepetitionFree, width + 2, 1);
  return out;
}

}  // namespace limitgen
