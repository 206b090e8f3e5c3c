#include "limitgen/cell_system.hpp"

#include <cassert>
#include <map>
#include <numeric>
#include <mutex>
#include <stdexcept>

#include "limitgen/errors.hpp"

namespace limitgen {

ProbePolicy& default_probe_policy() {
  static ProbePolicy policy;
  return policy;
}

namespace {

// number of positive powers of two <= p, i.e. #{m >= 1 : 2^m <= p}
std::uint64_t pow2_count(const Nat& p) {
  if (p < 2) return 0;
  return boost::multiprecision::msb(p);
}

class TrivialSystem final : public CellSystem {
 public:
  TrivialSystem() {
    meta_.card = CellMeta::Card::Infinite;
    meta_.density = CellDensity{Ratio(1), Ratio(1)};
  }
  std::size_t cell_count() const override { return 1; }
  std::size_t label(const Nat&) const override { return 0; }
  const CellMeta& meta(std::size_t) const override { return meta_; }
  Nat cell_nth(std::size_t, const Nat& n) const override { return n - 1; }
  Nat cell_rank(std::size_t, const Nat& bound) const override {
    return bound < 0 ? Nat(0) : bound;
  }
  std::string key() const override { return "trivial"; }
  std::string type_name() const override { return "trivial"; }
  std::optional<std::uint64_t> param() const override { return 1; }
  std::optional<std::pair<std::uint64_t, std::uint64_t>> arithmetic_cell(
      std::size_t) const override {
    return std::pair<std::uint64_t, std::uint64_t>{1, 0};
  }

 private:
  CellMeta meta_;
};

class ModularSystem final : public CellSystem {
 public:
  explicit ModularSystem(std::uint64_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("modular_system: n must be >= 1");
    CellMeta m;
    m.card = CellMeta::Card::Infinite;
    m.density = CellDensity{Ratio(1, n), Ratio(1, n)};
    metas_.assign(n_, m);
  }
  std::size_t cell_count() const override { return n_; }
  std::size_t label(const Nat& x) const override {
    return static_cast<std::size_t>(Nat(x % n_));
  }
  const CellMeta& meta(std::size_t c) const override { return metas_.at(c); }
  Nat cell_nth(std::size_t c, const Nat& n) const override {
    return (n - 1) * n_ + c;
  }
  Nat cell_rank(std::size_t c, const Nat& bound) const override {
    if (bound <= Nat(c)) return 0;
    return (bound - c - 1) / n_ + 1;
  }
  std::string key() const override { return "mod:" + std::to_string(n_); }
  std::string type_name() const override { return "modular"; }
  std::optional<std::uint64_t> param() const override { return n_; }
  std::optional<std::pair<std::uint64_t, std::uint64_t>> arithmetic_cell(
      std::size_t cell) const override {
    return std::pair<std::uint64_t, std::uint64_t>{n_, cell};
  }

 private:
  std::uint64_t n_;
  std::vector<CellMeta> metas_;
};

// Cell 0: values whose 1-based position is a power of two (value 2^m - 1).
// Cells 1..n: the q-th remaining position goes to cell 1 + (q-1) mod n.
class PowerSeparatedSystem final : public CellSystem {
 public:
  explicit PowerSeparatedSystem(std::uint64_t n) : n_(n) {
    if (n == 0)
      throw std::invalid_argument("power_separated_system: n must be >= 1");
    CellMeta z;
    z.card = CellMeta::Card::Infinite;
    z.density = CellDensity{Ratio(0), Ratio(0)};
    metas_.push_back(z);
    CellMeta a;
    a.card = CellMeta::Card::Infinite;
    a.density = CellDensity{Ratio(1, n), Ratio(1, n)};
    for (std::uint64_t i = 0; i < n_; ++i) metas_.push_back(a);
  }
  std::size_t cell_count() const override { return n_ + 1; }
  std::size_t label(const Nat& x) const override {
    Nat p = x + 1;  // 1-based position
    if (p >= 2 && (p & (p - 1)) == 0) return 0;
    Nat q = p - pow2_count(p);  // index among non-power positions
    return 1 + static_cast<std::size_t>(Nat((q - 1) % n_));
  }
  const CellMeta& meta(std::size_t c) const override { return metas_.at(c); }
  Nat cell_nth(std::size_t c, const Nat& n) const override {
    if (c == 0) {
      Nat v = Nat(1) << static_cast<unsigned>(n);
      return v - 1;
    }
    Nat q = (n - 1) * n_ + c;  // q-th non-power position wanted
    // fixed point of p = q + pow2_count(p)
    Nat p = q;
    for (;;) {
      Nat next = q + pow2_count(p);
      if (next == p) break;
      p = next;
    }
    if (p >= 2 && (p & (p - 1)) == 0) p -= 1;  // landed on a power
    return p - 1;
  }
  Nat cell_rank(std::size_t c, const Nat& bound) const override {
    if (bound <= 0) return 0;
    if (c == 0) return pow2_count(bound);  // 2^m - 1 < bound iff 2^m <= bound
    Nat nq = bound - pow2_count(bound);  // non-power positions <= bound
    if (nq < Nat(c)) return 0;
    return (nq - c) / n_ + 1;
  }
  std::string key() const override { return "powsep:" + std::to_string(n_); }
  std::string type_name() const override { return "power_separated"; }
  std::optional<std::uint64_t> param() const override { return n_; }

 private:
  std::uint64_t n_;
  std::vector<CellMeta> metas_;
};

// Block t covers positions s_{t-1}+1 .. s_t with s_t = s_{t-1} + t^2(1+s_{t-1});
// block t feeds cell (t-1) mod m.
class GrowingBlockSystem final : public CellSystem {
 public:
  explicit GrowingBlockSystem(std::uint64_t m) : m_(m) {
    if (m == 0)
      throw std::invalid_argument("growing_block_system: m must be >= 1");
    CellMeta a;
    a.card = CellMeta::Card::Infinite;
    a.density = CellDensity{Ratio(1), Ratio(0)};
    metas_.assign(m_, a);
    ends_.push_back(0);  // s_0
  }
  std::size_t cell_count() const override { return m_; }
  std::size_t label(const Nat& x) const override {
    std::size_t t = block_of_position(x + 1);
    return (t - 1) % m_;
  }
  const CellMeta& meta(std::size_t c) const override { return metas_.at(c); }
  Nat cell_nth(std::size_t c, const Nat& n) const override {
    Nat remaining = n;
    for (std::size_t t = c + 1;; t += m_) {
      ensure_blocks(t);
      Nat len = ends_[t] - ends_[t - 1];
      if (remaining <= len) return ends_[t - 1] + remaining - 1;
      remaining -= len;
    }
  }
  Nat cell_rank(std::size_t c, const Nat& bound) const override {
    Nat total = 0;
    for (std::size_t t = c + 1;; t += m_) {
      ensure_blocks(t);
      if (ends_[t - 1] >= bound) break;
      Nat hi = ends_[t] < bound ? ends_[t] : bound;
      total += hi - ends_[t - 1];
    }
    return total;
  }
  std::string key() const override { return "block:" + std::to_string(m_); }
  std::string type_name() const override { return "growing_block"; }
  std::optional<std::uint64_t> param() const override { return m_; }

  /// s_t prefix sums; index 0 holds s_0 = 0.
  Nat block_end(std::size_t t) const {
    ensure_blocks(t);
    return ends_[t];
  }

 private:
  void ensure_blocks(std::size_t t) const {
    while (ends_.size() <= t) {
      std::size_t i = ends_.size();
      Nat len = Nat(i) * Nat(i) * (1 + ends_.back());
      ends_.push_back(ends_.back() + len);
    }
  }
  std::size_t block_of_position(const Nat& p) const {
    std::size_t t = 1;
    for (;; ++t) {
      ensure_blocks(t);
      if (p <= ends_[t]) return t;
    }
  }

  std::uint64_t m_;
  std::vector<CellMeta> metas_;
  mutable std::vector<Nat> ends_;
};

// x == ra (mod A) and x == rb (mod B); nullopt when unsolvable.
std::optional<std::pair<std::uint64_t, std::uint64_t>> crt_merge(
    std::uint64_t A, std::uint64_t ra, std::uint64_t B, std::uint64_t rb) {
  std::uint64_t g = std::gcd(A, B);
  if (ra % g != rb % g) return std::nullopt;
  std::uint64_t lcm = A / g * B;
  std::uint64_t x = ra;
  while (x % B != rb) x += A;  // at most B/g steps
  return std::pair<std::uint64_t, std::uint64_t>{lcm, x};
}

class ProductSystem final : public CellSystem {
 public:
  ProductSystem(CellSystemPtr a, CellSystemPtr b, const ProbePolicy& policy)
      : a_(std::move(a)), b_(std::move(b)) {
    std::size_t count = a_->cell_count() * b_->cell_count();
    if (count > policy.cell_budget)
      throw IncompatibleCellSystems("product of " + a_->key() + " and " +
                                    b_->key() + " exceeds cell budget");
    metas_.resize(count);
    ap_.resize(count);
    for (std::size_t ca = 0; ca < a_->cell_count(); ++ca)
      for (std::size_t cb = 0; cb < b_->cell_count(); ++cb)
        derive_meta(ca, cb, policy);
  }
  std::size_t cell_count() const override { return metas_.size(); }
  std::size_t label(const Nat& x) const override {
    return a_->label(x) * b_->cell_count() + b_->label(x);
  }
  const CellMeta& meta(std::size_t c) const override { return metas_.at(c); }
  Nat cell_nth(std::size_t c, const Nat& n) const override {
    const CellMeta& m = metas_.at(c);
    if (m.card == CellMeta::Card::Finite) {
      if (n > m.elements.size())
        throw OutOfRange("cell_nth: finite product cell");
      return m.elements[static_cast<std::size_t>(n) - 1];
    }
    if (ap_[c]) return Nat(ap_[c]->second) + (n - 1) * ap_[c]->first;
    // scan the a-factor, filtering on the b-label
    std::size_t ca = c / b_->cell_count(), cb = c % b_->cell_count();
    Nat found = 0;
    for (Nat i = 1;; ++i) {
      Nat v = a_->cell_nth(ca, i);
      if (b_->label(v) == cb) {
        if (++found == n) return v;
      }
      if (i > (n + 1) * 1'000'000)
        throw ProbeExhausted("cell_nth: sparse product cell");
    }
  }
  Nat cell_rank(std::size_t c, const Nat& bound) const override {
    const CellMeta& m = metas_.at(c);
    Nat count = 0;
    if (m.card == CellMeta::Card::Finite) {
      for (const Nat& e : m.elements)
        if (e < bound) ++count;
      return count;
    }
    if (ap_[c]) {
      if (bound <= Nat(ap_[c]->second)) return 0;
      return (bound - ap_[c]->second - 1) / ap_[c]->first + 1;
    }
    std::size_t ca = c / b_->cell_count(), cb = c % b_->cell_count();
    Nat in_a = a_->cell_rank(ca, bound);
    for (Nat i = 1; i <= in_a; ++i)
      if (b_->label(a_->cell_nth(ca, i)) == cb) ++count;
    return count;
  }
  std::string key() const override {
    return "prod(" + a_->key() + "," + b_->key() + ")";
  }
  std::string type_name() const override { return "product"; }
  std::optional<std::pair<std::uint64_t, std::uint64_t>> arithmetic_cell(
      std::size_t c) const override {
    return ap_.at(c);
  }

 private:
  void derive_meta(std::size_t ca, std::size_t cb, const ProbePolicy& policy) {
    std::size_t id = ca * b_->cell_count() + cb;
    CellMeta& out = metas_[id];
    const CellMeta& ma = a_->meta(ca);
    const CellMeta& mb = b_->meta(cb);
    auto apa = a_->arithmetic_cell(ca);
    auto apb = b_->arithmetic_cell(cb);
    if (apa && apb) {
      auto merged = crt_merge(apa->first, apa->second, apb->first, apb->second);
      if (!merged) {
        out.card = CellMeta::Card::Finite;  // empty progression intersection
        out.density = CellDensity{Ratio(0), Ratio(0)};
        return;
      }
      out.card = CellMeta::Card::Infinite;
      out.density = CellDensity{Ratio(1, merged->first), Ratio(1, merged->first)};
      ap_[id] = merged;
      return;
    }
    if (ma.card == CellMeta::Card::Finite) {
      out.card = CellMeta::Card::Finite;
      for (const Nat& e : ma.elements)
        if (b_->label(e) == cb) out.elements.push_back(e);
      out.density = CellDensity{Ratio(0), Ratio(0)};
      return;
    }
    if (mb.card == CellMeta::Card::Finite) {
      out.card = CellMeta::Card::Finite;
      for (const Nat& e : mb.elements)
        if (a_->label(e) == ca) out.elements.push_back(e);
      out.density = CellDensity{Ratio(0), Ratio(0)};
      return;
    }
    if (ma.card == CellMeta::Card::Unknown ||
        mb.card == CellMeta::Card::Unknown) {
      out.card = CellMeta::Card::Unknown;
      return;
    }
    // both infinite: certify infinitude of the intersection by probing
    std::uint64_t witnesses = 0;
    for (Nat i = 1; i <= policy.horizon; ++i) {
      Nat v = a_->cell_nth(ca, i);
      if (v >= policy.horizon) break;
      if (b_->label(v) == cb && ++witnesses >= policy.witness_count) break;
    }
    out.card = witnesses >= policy.witness_count ? CellMeta::Card::Infinite
                                                 : CellMeta::Card::Unknown;
  }

  CellSystemPtr a_, b_;
  std::vector<CellMeta> metas_;
  std::vector<std::optional<std::pair<std::uint64_t, std::uint64_t>>> ap_;
};

}  // namespace

CellSystemPtr trivial_system() {
  static CellSystemPtr instance = std::make_shared<TrivialSystem>();
  return instance;
}

CellSystemPtr modular_system(std::uint64_t n) {
  if (n == 1) return trivial_system();
  return std::make_shared<ModularSystem>(n);
}

CellSystemPtr power_separated_system(std::uint64_t n) {
  return std::make_shared<PowerSeparatedSystem>(n);
}

CellSystemPtr growing_block_system(std::uint64_t m) {
  return std::make_shared<GrowingBlockSystem>(m);
}

CellSystemPtr product_system(const CellSystemPtr& a, const CellSystemPtr& b,
                             const ProbePolicy& policy) {
  if (same_system(a, b)) return a;
  if (a->key() == "trivial") return b;
  if (b->key() == "trivial") return a;
  return std::make_shared<ProductSystem>(a, b, policy);
}

CellSystemPtr system_from_name(const std::string& type_name,
                               std::uint64_t param) {
  if (type_name == "trivial") return trivial_system();
  if (type_name == "modular") return modular_system(param);
  if (type_name == "power_separated") return power_separated_system(param);
  if (type_name == "growing_block") return growing_block_system(param);
  throw ConfigError("unknown cell system type: " + type_name);
}

}  // namespace limitgen
