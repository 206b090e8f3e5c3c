#ifndef LIMITGEN_STREAM_HPP
#define LIMITGEN_STREAM_HPP

#include <cstdint>
#include <memory>
#include <optional>

#include "limitgen/language.hpp"
#include "limitgen/nat.hpp"

namespace limitgen {

enum class RepetitionPolicy { RepetitionFree, FinitelyRepeating, Arbitrary };

/// A deterministic element producer covering its target language. Streams
/// are single-owner and stateful; everything else in the module is
/// immutable after construction.
class EnumerationStream {
 public:
  virtual ~EnumerationStream() = default;

  virtual Nat next() = 0;
  RepetitionPolicy policy() const { return policy_; }
  std::optional<std::uint64_t> per_element_cap() const { return cap_; }
  /// Round by which the n-th canonical target element has appeared.
  virtual std::uint64_t coverage_deadline(std::uint64_t n) const = 0;

 protected:
  RepetitionPolicy policy_ = RepetitionPolicy::RepetitionFree;
  std::optional<std::uint64_t> cap_;
};

using StreamPtr = std::unique_ptr<EnumerationStream>;

/// Members of k in canonical order, repetition-free.
StreamPtr canonical_enumeration(const Language& k);

/// Covers k with every element repeated between 1 and cap times, positions
/// shuffled inside fixed block windows; deterministic per seed.
StreamPtr finitely_repeating_enumeration(const Language& k, std::uint64_t cap,
                                         std::uint64_t seed);

/// x_1, b, x_2, b, ... where x_i runs through k canonically; b repeats
/// forever, so the policy is Arbitrary.
StreamPtr bad_point_interleaver(const Language& k, Nat b);

/// Fixed stream replaying a precomputed list, then continuing with a
/// fallback producer (used by adversary constructions).
class ScriptedStream final : public EnumerationStream {
 public:
  ScriptedStream(std::vector<Nat> script,
                 std::function<Nat(std::uint64_t)> tail,
                 RepetitionPolicy policy, std::uint64_t deadline_factor);
  Nat next() override;
  std::uint64_t coverage_deadline(std::uint64_t n) const override;

 private:
  std::vector<Nat> script_;
  std::function<Nat(std::uint64_t)> tail_;  // 1-based index past the script
  std::uint64_t pos_ = 0;
  std::uint64_t deadline_factor_;
};

}  // namespace limitgen

#endif
