#include <algorithm>
#include <map>
#include <set>

#include "limitgen/errors.hpp"
#include "limitgen/harness.hpp"

namespace limitgen {

namespace {

struct Text {
  std::vector<std::uint8_t> word;  // symbol ids; base inputs follow forever
  std::size_t target = 0;          // 1-based collection index
};

/// Map a symbol word to the language it enumerates together with the base
/// set, or 0 when it matches no collection member.
std::size_t target_of(const std::vector<Nat>& word, const HardInstance& inst) {
  std::set<Nat> present(word.begin(), word.end());
  for (std::size_t i = 1; i <= inst.collection.size(); ++i) {
    const Language& lang = inst.collection.language(i);
    bool match = true;
    for (const Nat& s : inst.texts->symbols) {
      bool in_lang = lang.contains(s);
      bool in_word = present.count(s) > 0;
      if (in_lang != in_word) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return 0;
}

/// eventual constant output on word + infinite base tail, or -1 if the
/// index sequence never stabilizes
int eventual_state(const Text& text, const std::uint8_t* table,
                   std::uint8_t symbols, std::uint8_t init) {
  std::uint8_t state = init;
  for (std::uint8_t sym : text.word) state = table[state * (symbols + 1) + sym];
  for (int step = 0; step < 4; ++step) {
    std::uint8_t next = table[state * (symbols + 1) + symbols];  // base input
    if (next == state) return state;
    state = next;
  }
  return -1;  // the base orbit cycles without a fixed point
}

}  // namespace

BruteforceReport bruteforce_incremental(const HardInstance& instance,
                                        bool uniform_on_base) {
  if (!uniform_on_base)
    throw SizeLimit(
        "bruteforce_incremental: only the base-uniform class is finitely "
        "enumerable");
  if (!instance.texts)
    throw std::invalid_argument(
        "bruteforce_incremental: instance carries no distinguishing texts");
  const DistinguishingTexts& dt = *instance.texts;
  const std::uint8_t symbol_count = static_cast<std::uint8_t>(dt.symbols.size());
  auto symbol_id = [&](const Nat& s) -> std::uint8_t {
    for (std::uint8_t i = 0; i < symbol_count; ++i)
      if (dt.symbols[i] == s) return i;
    throw std::invalid_argument("bruteforce: unknown symbol");
  };

  // assemble the distinguishing texts: prefix ++ suffix, deduplicated,
  // kept when the word enumerates exactly one collection member
  std::vector<Text> texts;
  std::set<std::vector<std::uint8_t>> seen_words;
  for (const auto& prefix : dt.prefixes)
    for (const auto& suffix : dt.suffixes) {
      std::vector<Nat> word = prefix;
      word.insert(word.end(), suffix.begin(), suffix.end());
      std::size_t target = target_of(word, instance);
      if (target == 0) continue;
      Text text;
      for (const Nat& s : word) text.word.push_back(symbol_id(s));
      if (!seen_words.insert(text.word).second) continue;
      text.target = target;
      texts.push_back(std::move(text));
    }

  const std::uint64_t table_entries = 3ull * (symbol_count + 1);
  std::uint64_t table_count = 1;
  for (std::uint64_t i = 0; i < table_entries; ++i) table_count *= 3;
  BruteforceReport report;
  report.learner_class =
      "base-uniform incremental learners: 3 states x " +
      std::to_string(symbol_count) +
      " symbols + base -> 3 states, 3 initial states";
  report.candidates_total = table_count * 3;
  report.texts_simulated = texts.size();

  // candidate id = init + 3 * table-digits (base 3)
  std::vector<std::uint8_t> table(table_entries);
  report.failing_text_id.assign(report.candidates_total, -1);
  bool pigeonhole_all = true;
  const bool four_prefix = instance.certificate.kind == "prop5.1";
  for (std::uint64_t tab = 0; tab < table_count; ++tab) {
    std::uint64_t digits = tab;
    for (std::uint64_t e = 0; e < table_entries; ++e) {
      table[e] = static_cast<std::uint8_t>(digits % 3);
      digits /= 3;
    }
    for (std::uint8_t init = 0; init < 3; ++init) {
      std::uint64_t candidate = tab * 3 + init;
      int failing = -1;
      for (std::size_t ti = 0; ti < texts.size(); ++ti) {
        int final_state = eventual_state(texts[ti], table.data(), symbol_count,
                                         init);
        if (final_state != static_cast<int>(texts[ti].target) - 1) {
          failing = static_cast<int>(ti);
          break;
        }
      }
      if (failing < 0)
        report.survivors.push_back(candidate);
      else
        report.failing_text_id[candidate] = failing;
      if (four_prefix) {
        // replay the pigeonhole: the four distinguished prefixes cannot
        // reach pairwise distinct states with only three of them
        std::uint8_t q[4];
        for (int p = 0; p < 4; ++p) {
          std::uint8_t state = init;
          for (const Nat& s : dt.prefixes[p])
            state = table[state * (symbol_count + 1) + symbol_id(s)];
          q[p] = state;
        }
        bool collision = false;
        for (int a = 0; a < 4 && !collision; ++a)
          for (int b = a + 1; b < 4; ++b)
            if (q[a] == q[b]) {
              collision = true;
              break;
            }
        if (!collision || failing < 0) pigeonhole_all = false;
      }
    }
  }
  report.pigeonhole_verified = four_prefix && pigeonhole_all;
  return report;
}

}  // namespace limitgen
