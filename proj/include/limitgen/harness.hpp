#ifndef LIMITGEN_HARNESS_HPP
#define LIMITGEN_HARNESS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "limitgen/adversaries.hpp"
#include "limitgen/coding.hpp"
#include "limitgen/generators.hpp"
#include "limitgen/stream.hpp"

namespace limitgen {

enum class OutputMode { Set, Index, Element };

/// Tagged generator output for one round.
struct Output {
  OutputMode mode = OutputMode::Set;
  std::optional<SetExpr> set;
  std::size_t index = 0;  // 1-based
  Nat element;

  std::string repr() const;
};

/// Single-owner stateful wrapper over the pure step functions, stepped by
/// the game loop.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual Output step(const Nat& x) = 0;
  virtual OutputMode mode() const = 0;
  /// Buffer generators report their insertions; others return nullopt.
  virtual std::optional<std::size_t> buffer_insertions() const {
    return std::nullopt;
  }
  virtual std::optional<std::size_t> residual_size() const {
    return std::nullopt;
  }
};

using GeneratorPtr = std::unique_ptr<Generator>;

GeneratorPtr make_canonical_generator(Collection coll,
                                      ProbePolicy policy = default_probe_policy());
GeneratorPtr make_memoryless_countable_generator(
    Collection coll, PrefixBijection bijection = default_bijection(),
    ProbePolicy policy = default_probe_policy());
GeneratorPtr make_window_generator(Collection coll, WindowStrategy strategy,
                                   std::uint64_t width,
                                   ProbePolicy policy = default_probe_policy());
GeneratorPtr make_buffer_generator(Collection coll, std::uint64_t capacity,
                                   ProbePolicy policy = default_probe_policy());
/// Relabels internally; `order_out`, when given, receives the permutation.
GeneratorPtr make_incremental_identifier(
    const Collection& coll, std::vector<std::size_t>* order_out = nullptr,
    ProbePolicy policy = default_probe_policy());
GeneratorPtr make_coding_generator(const Collection& coll,
                                   std::uint64_t round_cap = 24,
                                   ProbePolicy policy = default_probe_policy());
/// Wraps a raw element rule x -> y.
GeneratorPtr make_element_rule_generator(std::function<Nat(const Nat&)> rule);
/// Wraps a raw index rule x -> i.
GeneratorPtr make_index_rule_generator(std::function<std::size_t(const Nat&)> rule);

enum class RoundVerdict { Valid, Invalid, Unknown };

struct RoundRecord {
  std::uint64_t t = 0;
  Nat input;
  Output output;
  RoundVerdict verdict = RoundVerdict::Valid;
  std::optional<Ratio> upper_density;  // attached at sampling rounds
  std::optional<std::size_t> buffer_insertions;
  std::optional<std::size_t> residual_size;
};

struct GameTranscript {
  std::vector<RoundRecord> rounds;
  std::optional<std::uint64_t> t_star;
  std::uint64_t invalid_before = 0;  // violations before t_star
  std::uint64_t invalid_after = 0;   // violations at or after t_star (0 by construction)
  std::uint64_t unknown_rounds = 0;
};

enum class IdentifyMode { Exact, Approximate };

struct GameConfig {
  std::uint64_t rounds = 2000;
  std::uint64_t sample_every = 0;  // 0 disables density sampling
  IdentifyMode identify = IdentifyMode::Exact;
  ProbePolicy probe;
};

/// Drives generator against stream for the configured rounds, recording
/// validity per round and the detected convergence time. Index outputs are
/// judged against the target (exactly or approximately); element outputs
/// must be fresh target members; set outputs must be target subsets.
GameTranscript run_game(Generator& gen, EnumerationStream& stream,
                        const Language& target, const Collection* coll,
                        const GameConfig& config);

/// Largest-prefix rule: one past the last violating round, or 1 when the
/// run is clean; nullopt when a violation falls in the final tenth of the
/// run (insufficient evidence).
std::optional<std::uint64_t> detect_convergence(
    const std::vector<bool>& violation, std::uint64_t rounds);

struct DensityProfile {
  std::vector<std::pair<std::uint64_t, Ratio>> samples;  // post-t* only
  std::optional<Ratio> sup;
  std::optional<Ratio> inf;
};

/// Collects the sampled upper densities at or after t_star.
DensityProfile density_profile(const GameTranscript& transcript);

struct ClassifyOutcome {
  enum class Kind { Generable, Counterexample, Unknown } kind = Kind::Unknown;
  std::optional<Nat> counterexample;  // least failing element
};

/// Scans elements of the union up to the horizon checking that every
/// single-example intersection is infinite.
ClassifyOutcome classify_single_example(const Collection& coll,
                                        const ProbePolicy& policy = default_probe_policy(),
                                        std::uint64_t scan_horizon = 10'000);

struct BruteforceReport {
  std::string learner_class;
  std::uint64_t candidates_total = 0;
  std::uint64_t texts_simulated = 0;
  std::vector<std::uint64_t> survivors;
  /// Indexed by candidate id; the first failing text, -1 for survivors.
  std::vector<std::int32_t> failing_text_id;
  bool pigeonhole_verified = false;
};

/// Exhausts every base-uniform incremental learner over {1,2,3} states on
/// the instance's distinguishing texts under the exact success criterion;
/// also replays the four-prefix pigeonhole argument per candidate.
BruteforceReport bruteforce_incremental(const HardInstance& instance,
                                        bool uniform_on_base = true);

/// The union of all finite intersections of subfamilies of the first z
/// languages; the containment target for memoryless bad sets.
std::vector<Nat> finite_intersection_union(const Collection& coll, std::size_t z,
                                           const ProbePolicy& policy = default_probe_policy());

/// Bad set of the countable memoryless rule for target index z, scanned
/// over domain values below the horizon without materializing outputs.
std::vector<Nat> memoryless_bad_set(const Collection& coll,
                                    const PrefixBijection& bijection,
                                    std::size_t z, std::uint64_t domain_horizon,
                                    const ProbePolicy& policy = default_probe_policy());

}  // namespace limitgen

#endif
