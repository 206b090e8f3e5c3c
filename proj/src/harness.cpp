#include "limitgen/harness.hpp"

#include <algorithm>
#include <set>

#include "limitgen/errors.hpp"

namespace limitgen {

std::string Output::repr() const {
  switch (mode) {
    case OutputMode::Set: return set ? set->describe() : "<none>";
    case OutputMode::Index: return "L" + std::to_string(index);
    case OutputMode::Element: return element.str();
  }
  return {};
}

namespace {

class CanonicalGenerator final : public Generator {
 public:
  CanonicalGenerator(Collection coll, ProbePolicy policy)
      : coll_(std::move(coll)), policy_(policy) {}
  Output step(const Nat& x) override {
    Output out;
    out.mode = OutputMode::Set;
    out.set = canonical_intersection_step(coll_, x, policy_);
    return out;
  }
  OutputMode mode() const override { return OutputMode::Set; }

 private:
  Collection coll_;
  ProbePolicy policy_;
};

class MemorylessCountableGenerator final : public Generator {
 public:
  MemorylessCountableGenerator(Collection coll, PrefixBijection bijection,
                               ProbePolicy policy)
      : coll_(std::move(coll)),
        bijection_(std::move(bijection)),
        policy_(policy) {}
  Output step(const Nat& x) override {
    Output out;
    out.mode = OutputMode::Set;
    out.set = memoryless_countable_step(coll_, bijection_, x, policy_);
    return out;
  }
  OutputMode mode() const override { return OutputMode::Set; }

 private:
  Collection coll_;
  PrefixBijection bijection_;
  ProbePolicy policy_;
};

class WindowGenerator final : public Generator {
 public:
  WindowGenerator(Collection coll, WindowStrategy strategy, std::uint64_t width,
                  ProbePolicy policy)
      : coll_(std::move(coll)),
        strategy_(strategy),
        width_(width),
        policy_(policy) {}
  Output step(const Nat& x) override {
    auto [set, next] = window_step(coll_, strategy_, width_, state_, x, policy_);
    state_ = std::move(next);
    Output out;
    out.mode = OutputMode::Set;
    out.set = std::move(set);
    return out;
  }
  OutputMode mode() const override { return OutputMode::Set; }

 private:
  Collection coll_;
  WindowStrategy strategy_;
  std::uint64_t width_;
  ProbePolicy policy_;
  WindowState state_;
};

class BufferGenerator final : public Generator {
 public:
  BufferGenerator(Collection coll, std::uint64_t capacity, ProbePolicy policy)
      : coll_(std::move(coll)),
        capacity_(capacity),
        policy_(policy),
        state_(buffer_init(coll_)) {}
  Output step(const Nat& x) override {
    auto [set, next] = buffer_step(coll_, capacity_, std::move(state_), x, policy_);
    state_ = std::move(next);
    Output out;
    out.mode = OutputMode::Set;
    out.set = std::move(set);
    return out;
  }
  OutputMode mode() const override { return OutputMode::Set; }
  std::optional<std::size_t> buffer_insertions() const override {
    return state_.stored.size();
  }
  std::optional<std::size_t> residual_size() const override {
    return state_.residual.size();
  }

 private:
  Collection coll_;
  std::uint64_t capacity_;
  ProbePolicy policy_;
  BufferState state_;
};

class IncrementalIdentifierGenerator final : public Generator {
 public:
  IncrementalIdentifierGenerator(const Collection& coll,
                                 std::vector<std::size_t>* order_out,
                                 ProbePolicy policy)
      : order_(topological_order(coll, policy)),
        relabeled_(relabel(coll, order_)) {
    if (order_out) *order_out = order_;
  }
  Output step(const Nat& x) override {
    auto [index, next] = incremental_identify_step(relabeled_, state_, x);
    state_ = next;
    Output out;
    out.mode = OutputMode::Index;
    out.index = index;
    return out;
  }
  OutputMode mode() const override { return OutputMode::Index; }
  const Collection& relabeled() const { return relabeled_; }

 private:
  std::vector<std::size_t> order_;
  Collection relabeled_;
  IncrementalState state_;
};

class CodingElementGenerator final : public Generator {
 public:
  CodingElementGenerator(const Collection& coll, std::uint64_t cap,
                         ProbePolicy policy)
      : inner_(coll, policy, cap), state_(inner_.initial()) {}
  Output step(const Nat& x) override {
    auto [element, next] = inner_.step(state_, x);
    state_ = std::move(next);
    Output out;
    out.mode = OutputMode::Element;
    out.element = std::move(element);
    return out;
  }
  OutputMode mode() const override { return OutputMode::Element; }

 private:
  CodingGenerator inner_;
  CodingState state_;
};

class ElementRuleGenerator final : public Generator {
 public:
  explicit ElementRuleGenerator(std::function<Nat(const Nat&)> rule)
      : rule_(std::move(rule)) {}
  Output step(const Nat& x) override {
    Output out;
    out.mode = OutputMode::Element;
    out.element = rule_(x);
    return out;
  }
  OutputMode mode() const override { return OutputMode::Element; }

 private:
  std::function<Nat(const Nat&)> rule_;
};

class IndexRuleGenerator final : public Generator {
 public:
  explicit IndexRuleGenerator(std::function<std::size_t(const Nat&)> rule)
      : rule_(std::move(rule)) {}
  Output step(const Nat& x) override {
    Output out;
    out.mode = OutputMode::Index;
    out.index = rule_(x);
    return out;
  }
  OutputMode mode() const override { return OutputMode::Index; }

 private:
  std::function<std::size_t(const Nat&)> rule_;
};

}  // namespace

GeneratorPtr make_canonical_generator(Collection coll, ProbePolicy policy) {
  return std::make_unique<CanonicalGenerator>(std::move(coll), policy);
}

GeneratorPtr make_memoryless_countable_generator(Collection coll,
                                                 PrefixBijection bijection,
                                                 ProbePolicy policy) {
  return std::make_unique<MemorylessCountableGenerator>(
      std::move(coll), std::move(bijection), policy);
}

GeneratorPtr make_window_generator(Collection coll, WindowStrategy strategy,
                                   std::uint64_t width, ProbePolicy policy) {
  return std::make_unique<WindowGenerator>(std::move(coll), strategy, width,
                                           policy);
}

GeneratorPtr make_buffer_generator(Collection coll, std::uint64_t capacity,
                                   ProbePolicy policy) {
  return std::make_unique<BufferGenerator>(std::move(coll), capacity, policy);
}

GeneratorPtr make_incremental_identifier(const Collection& coll,
                                         std::vector<std::size_t>* order_out,
                                         ProbePolicy policy) {
  return std::make_unique<IncrementalIdentifierGenerator>(coll, order_out,
                                                          policy);
}

GeneratorPtr make_coding_generator(const Collection& coll,
                                   std::uint64_t round_cap,
                                   ProbePolicy policy) {
  return std::make_unique<CodingElementGenerator>(coll, round_cap, policy);
}

GeneratorPtr make_element_rule_generator(std::function<Nat(const Nat&)> rule) {
  return std::make_unique<ElementRuleGenerator>(std::move(rule));
}

GeneratorPtr make_index_rule_generator(
    std::function<std::size_t(const Nat&)> rule) {
  return std::make_unique<IndexRuleGenerator>(std::move(rule));
}

std::optional<std::uint64_t> detect_convergence(
    const std::vector<bool>& violation, std::uint64_t rounds) {
  std::uint64_t last = 0;
  for (std::uint64_t t = 1; t <= violation.size() && t <= rounds; ++t)
    if (violation[t - 1]) last = t;
  if (last == 0) return 1;
  if (last * 10 > rounds * 9) return std::nullopt;  // tail-window rule
  return last + 1;
}

GameTranscript run_game(Generator& gen, EnumerationStream& stream,
                        const Language& target, const Collection* coll,
                        const GameConfig& config) {
  GameTranscript tr;
  std::set<Nat> seen;
  std::vector<bool> violation(config.rounds, false);
  std::map<std::size_t, RoundVerdict> index_cache;

  auto judge_index = [&](std::size_t index) -> RoundVerdict {
    auto it = index_cache.find(index);
    if (it != index_cache.end()) return it->second;
    if (!coll)
      throw std::invalid_argument("run_game: index output needs the collection");
    RoundVerdict v = RoundVerdict::Invalid;
    const Language& guess = coll->language(index);
    if (config.identify == IdentifyMode::Exact) {
      try {
        v = set_equal(guess.expr(), target.expr(), config.probe)
                ? RoundVerdict::Valid
                : RoundVerdict::Invalid;
      } catch (const VerdictUnknown&) {
        v = RoundVerdict::Unknown;
      }
    } else {
      AlmostOrder order = almost_compare(guess, target, config.probe);
      v = order == AlmostOrder::Equivalent ? RoundVerdict::Valid
          : order == AlmostOrder::Unknown  ? RoundVerdict::Unknown
                                           : RoundVerdict::Invalid;
    }
    index_cache.emplace(index, v);
    return v;
  };

  for (std::uint64_t t = 1; t <= config.rounds; ++t) {
    RoundRecord rec;
    rec.t = t;
    rec.input = stream.next();
    seen.insert(rec.input);
    rec.output = gen.step(rec.input);
    switch (rec.output.mode) {
      case OutputMode::Set: {
        SubsetVerdict v =
            is_subset(*rec.output.set, target.expr(), config.probe);
        rec.verdict = v.is_true()    ? RoundVerdict::Valid
                      : v.is_false() ? RoundVerdict::Invalid
                                     : RoundVerdict::Unknown;
        break;
      }
      case OutputMode::Index:
        rec.verdict = judge_index(rec.output.index);
        break;
      case OutputMode::Element:
        rec.verdict = target.contains(rec.output.element) &&
                              !seen.count(rec.output.element)
                          ? RoundVerdict::Valid
                          : RoundVerdict::Invalid;
        break;
    }
    if (rec.verdict == RoundVerdict::Unknown) ++tr.unknown_rounds;
    violation[t - 1] = rec.verdict != RoundVerdict::Valid;
    if (config.sample_every && t % config.sample_every == 0 &&
        rec.output.mode == OutputMode::Set)
      rec.upper_density = exact_upper_density(*rec.output.set, target);
    rec.buffer_insertions = gen.buffer_insertions();
    rec.residual_size = gen.residual_size();
    tr.rounds.push_back(std::move(rec));
  }
  tr.t_star = detect_convergence(violation, config.rounds);
  for (std::uint64_t t = 1; t <= config.rounds; ++t)
    if (violation[t - 1]) {
      if (tr.t_star && t >= *tr.t_star)
        ++tr.invalid_after;
      else
        ++tr.invalid_before;
    }
  return tr;
}

DensityProfile density_profile(const GameTranscript& transcript) {
  DensityProfile out;
  if (!transcript.t_star) return out;
  for (const RoundRecord& rec : transcript.rounds) {
    if (rec.t < *transcript.t_star || !rec.upper_density) continue;
    out.samples.emplace_back(rec.t, *rec.upper_density);
    if (!out.sup || *rec.upper_density > *out.sup) out.sup = rec.upper_density;
    if (!out.inf || *rec.upper_density < *out.inf) out.inf = rec.upper_density;
  }
  return out;
}

ClassifyOutcome classify_single_example(const Collection& coll,
                                        const ProbePolicy& policy,
                                        std::uint64_t scan_horizon) {
  ClassifyOutcome out;
  for (Nat v = 0; v < scan_horizon; ++v) {
    std::vector<std::size_t> sig = signature(coll, v);
    if (sig.empty()) continue;
    std::vector<const SetExpr*> members;
    for (std::size_t i : sig) members.push_back(&coll.language(i).expr());
    SetExpr inter = members.size() == 1
                        ? *members[0]
                        : set_intersection(*members[0], *members[1], policy);
    for (std::size_t j = 2; j < members.size(); ++j)
      inter = set_intersection(inter, *members[j], policy);
    FinitenessVerdict fin = finiteness(inter, policy);
    if (fin.is_finite()) {
      out.kind = ClassifyOutcome::Kind::Counterexample;
      out.counterexample = v;
      return out;
    }
    if (!fin.is_infinite()) {
      out.kind = ClassifyOutcome::Kind::Unknown;
      out.counterexample = v;
      return out;
    }
  }
  out.kind = ClassifyOutcome::Kind::Generable;
  return out;
}

std::vector<Nat> finite_intersection_union(const Collection& coll,
                                           std::size_t z,
                                           const ProbePolicy& policy) {
  if (z > 16) throw SizeLimit("finite_intersection_union: prefix too long");
  std::vector<Nat> out;
  for (std::uint32_t mask = 1; mask < (1u << z); ++mask) {
    std::optional<SetExpr> inter;
    for (std::size_t j = 1; j <= z; ++j)
      if ((mask >> (j - 1)) & 1u) {
        inter = inter ? set_intersection(*inter, coll.language(j).expr(), policy)
                      : coll.language(j).expr();
      }
    FinitenessVerdict fin = finiteness(*inter, policy);
    if (fin.is_finite())
      out.insert(out.end(), fin.elements.begin(), fin.elements.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Nat> memoryless_bad_set(const Collection& coll,
                                    const PrefixBijection& bijection,
                                    std::size_t z, std::uint64_t domain_horizon,
                                    const ProbePolicy& policy) {
  const Language& target = coll.language(z);
  if (!target.expr().is_structured())
    throw std::invalid_argument("memoryless_bad_set: structured targets only");
  const auto& target_rep = target.expr().structured_rep();
  std::vector<Nat> bad;
  for (Nat x = 0; x < domain_horizon; ++x) {
    std::uint64_t cutoff = static_cast<std::uint64_t>(
        memoryless_countable_prefix(coll, bijection, x, policy));
    // signature pass: surviving cells plus the correction candidates
    const CellSystemPtr& system = target_rep.system;
    std::vector<char> alive(system->cell_count(), 1);
    bool shared = true;
    std::vector<std::size_t> sig;
    std::vector<Nat> candidates(target_rep.minus);
    for (std::uint64_t j = 1; j <= cutoff; ++j) {
      const Language& lang = coll.language(j);
      if (!lang.contains(x)) continue;
      sig.push_back(j);
      if (!lang.expr().is_structured() ||
          !same_system(lang.expr().structured_rep().system, system)) {
        shared = false;
        break;
      }
      const auto& rep = lang.expr().structured_rep();
      std::vector<char> next(alive.size(), 0);
      for (std::size_t c : rep.cells)
        if (alive[c]) next[c] = 1;
      alive = std::move(next);
      candidates.insert(candidates.end(), rep.plus.begin(), rep.plus.end());
    }
    bool is_bad = false;
    if (!shared) {
      // fall back to the materialized output
      SetExpr output = memoryless_countable_step(coll, bijection, x, policy);
      SubsetVerdict v = is_subset(output, target.expr(), policy);
      if (!v.is_true()) is_bad = true;
    } else {
      if (sig.empty()) {
        // output is the full domain
        is_bad = !target.expr().is_full_domain();
      } else {
        for (std::size_t c = 0; c < alive.size() && !is_bad; ++c) {
          if (!alive[c]) continue;
          const CellMeta& meta = system->meta(c);
          if (meta.card == CellMeta::Card::Infinite &&
              !std::binary_search(target_rep.cells.begin(),
                                  target_rep.cells.end(), c))
            is_bad = true;
          if (meta.card == CellMeta::Card::Finite)
            candidates.insert(candidates.end(), meta.elements.begin(),
                              meta.elements.end());
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());
        for (const Nat& u : candidates) {
          if (is_bad) break;
          if (target.contains(u)) continue;
          bool in_output = true;
          for (std::size_t j : sig)
            if (!coll.language(j).contains(u)) {
              in_output = false;
              break;
            }
          if (in_output) is_bad = true;
        }
      }
    }
    if (is_bad) bad.push_back(x);
  }
  return bad;
}

}  // namespace limitgen
