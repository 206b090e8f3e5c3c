#include "limitgen/stream.hpp"

#include <algorithm>
#include <random>

#include "limitgen/errors.hpp"

namespace limitgen {

namespace {

class CanonicalStream final : public EnumerationStream {
 public:
  explicit CanonicalStream(const Language& k) : it_(k.members()) {
    policy_ = RepetitionPolicy::RepetitionFree;
    cap_ = 1;
  }
  Nat next() override {
    std::optional<Nat> v = it_.next();
    if (!v) throw ProbeExhausted("canonical stream exhausted");
    return *v;
  }
  std::uint64_t coverage_deadline(std::uint64_t n) const override { return n; }

 private:
  SetExpr::MemberIterator it_;
};

/// Deals the canonical enumeration into windows of kBlock elements; inside
/// a window every element gets a seeded multiplicity in [1, cap] and the
/// window is emitted in seeded shuffled order.
class FinitelyRepeatingStream final : public EnumerationStream {
 public:
  static constexpr std::uint64_t kBlock = 16;

  FinitelyRepeatingStream(const Language& k, std::uint64_t cap,
                          std::uint64_t seed)
      : it_(k.members()), cap_value_(cap), rng_(seed ^ 0x9e3779b97f4a7c15ULL) {
    if (cap == 0)
      throw std::invalid_argument("finitely repeating stream: cap must be >= 1");
    policy_ = cap == 1 ? RepetitionPolicy::RepetitionFree
                       : RepetitionPolicy::FinitelyRepeating;
    cap_ = cap;
  }

  Nat next() override {
    if (queue_pos_ == queue_.size()) refill();
    return queue_[queue_pos_++];
  }

  std::uint64_t coverage_deadline(std::uint64_t n) const override {
    std::uint64_t blocks = (n + kBlock - 1) / kBlock;
    return blocks * kBlock * cap_value_;
  }

 private:
  void refill() {
    queue_.clear();
    queue_pos_ = 0;
    for (std::uint64_t i = 0; i < kBlock; ++i) {
      std::optional<Nat> v = it_.next();
      if (!v) break;
      std::uint64_t copies = 1 + rng_() % cap_value_;
      for (std::uint64_t c = 0; c < copies; ++c) queue_.push_back(*v);
    }
    if (queue_.empty())
      throw ProbeExhausted("finitely repeating stream exhausted");
    std::shuffle(queue_.begin(), queue_.end(), rng_);
  }

  SetExpr::MemberIterator it_;
  std::uint64_t cap_value_;
  std::mt19937_64 rng_;
  std::vector<Nat> queue_;
  std::size_t queue_pos_ = 0;
};

class BadPointStream final : public EnumerationStream {
 public:
  BadPointStream(const Language& k, Nat b) : it_(k.members()), b_(std::move(b)) {
    policy_ = RepetitionPolicy::Arbitrary;
  }
  Nat next() override {
    emit_bad_ = !emit_bad_;
    if (!emit_bad_) return b_;
    std::optional<Nat> v = it_.next();
    if (!v) throw ProbeExhausted("bad point stream exhausted");
    return *v;
  }
  std::uint64_t coverage_deadline(std::uint64_t n) const override {
    return 2 * n;
  }

 private:
  SetExpr::MemberIterator it_;
  Nat b_;
  bool emit_bad_ = false;
};

}  // namespace

StreamPtr canonical_enumeration(const Language& k) {
  return std::make_unique<CanonicalStream>(k);
}

StreamPtr finitely_repeating_enumeration(const Language& k, std::uint64_t cap,
                                         std::uint64_t seed) {
  return std::make_unique<FinitelyRepeatingStream>(k, cap, seed);
}

StreamPtr bad_point_interleaver(const Language& k, Nat b) {
  if (!k.contains(b))
    throw std::invalid_argument("bad_point_interleaver: b outside target");
  return std::make_unique<BadPointStream>(k, std::move(b));
}

ScriptedStream::ScriptedStream(std::vector<Nat> script,
                               std::function<Nat(std::uint64_t)> tail,
                               RepetitionPolicy policy,
                               std::uint64_t deadline_factor)
    : script_(std::move(script)),
      tail_(std::move(tail)),
      deadline_factor_(deadline_factor) {
  policy_ = policy;
}

Nat ScriptedStream::next() {
  ++pos_;
  if (pos_ <= script_.size()) return script_[pos_ - 1];
  if (!tail_) throw ProbeExhausted("scripted stream exhausted");
  return tail_(pos_ - script_.size());
}

std::uint64_t ScriptedStream::coverage_deadline(std::uint64_t n) const {
  return deadline_factor_ * n + script_.size();
}

}  // namespace limitgen
