#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csl/core.hpp"
#include "csl/games.hpp"

namespace csl {

/// bits[i-1] is true when agent i would deviate from its specified strategy.
struct Observation {
  std::vector<bool> bits;

  bool operator[](AgentId i) const { return bits.at(static_cast<std::size_t>(i - 1)); }
  int n() const { return static_cast<int>(bits.size()); }
  bool any() const;
  AgentSet deviators() const;
  /// "0110"-style rendering, agent 1 first.
  std::string to_bitstring() const;
  static Observation from_bitstring(const std::string& s);

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Deterministic rule picking one of several admissible joint best responses.
class AdversaryPolicy {
 public:
  enum class Kind { first, last, seeded };

  static AdversaryPolicy first() { return AdversaryPolicy(Kind::first, 0); }
  static AdversaryPolicy last() { return AdversaryPolicy(Kind::last, 0); }
  static AdversaryPolicy seeded(std::uint64_t seed) { return AdversaryPolicy(Kind::seeded, seed); }
  /// Accepts "first", "last" or "seed:<n>".
  static AdversaryPolicy parse(const std::string& text);

  /// first, last, then seeds 1..seed_count.
  static std::vector<AdversaryPolicy> sweep(int seed_count = 16);

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::string name() const;

  /// Picks an index in [0, option_count). `context` identifies the game and
  /// block so the same situation always resolves the same way.
  std::size_t select(std::size_t option_count, std::uint64_t context) const;

  friend bool operator==(const AdversaryPolicy&, const AdversaryPolicy&) = default;

 private:
  AdversaryPolicy(Kind kind, std::uint64_t seed) : kind_(kind), seed_(seed) {}

  Kind kind_;
  std::uint64_t seed_;
};

/// Per-coalition result of best-response analysis. When the specified
/// sub-profile is a joint best response nobody deviates; otherwise
/// `admissible` lists the distinct deviator sets over all joint best
/// responses, sorted lexicographically.
struct BlockOutcome {
  bool specified_is_best = true;
  std::vector<AgentSet> admissible;

  friend bool operator==(const BlockOutcome&, const BlockOutcome&) = default;
};

std::uint64_t game_fingerprint(const GameStrategyPair& g);

/// Resolves each block's outcome with `policy` and concatenates the bits.
Observation assemble_observation(const CoalitionStructure& truth,
                                 const std::vector<BlockOutcome>& outcomes,
                                 const AdversaryPolicy& policy, std::uint64_t fingerprint);

// Fast oracles. Each evaluates the gadget characterization directly.

std::vector<BlockOutcome> factored_outcomes(const CoalitionStructure& truth,
                                            const FactoredNormalFormGame& g);
std::vector<BlockOutcome> braess_outcomes(const CoalitionStructure& truth,
                                          const CongestionGame& g);
std::vector<BlockOutcome> auction_outcomes(const CoalitionStructure& truth,
                                           const AuctionGame& g);

Observation observe_factored(const CoalitionStructure& truth,
                             const FactoredNormalFormGame& g,
                             const AdversaryPolicy& policy = AdversaryPolicy::first());
Observation observe_braess(const CoalitionStructure& truth, const CongestionGame& g,
                           const AdversaryPolicy& policy = AdversaryPolicy::first());
Observation observe_auction(const CoalitionStructure& truth, const AuctionGame& g,
                            const AdversaryPolicy& policy = AdversaryPolicy::first());

/// True when `g` is exactly braess_product of its recorded placements.
bool is_braess_product(const CongestionGame& g);

// Reference oracle: exhaustive joint-strategy enumeration per coalition.

inline constexpr std::uint64_t kDefaultBruteForceCap = 1'000'000;

/// Bid grid used for auctions in the reference oracle.
inline constexpr double kAuctionBidGrid[] = {0.0, 0.5, 1.0};

std::vector<BlockOutcome> brute_force_outcomes(const CoalitionStructure& truth,
                                               const GameStrategyPair& g,
                                               std::uint64_t cap = kDefaultBruteForceCap);
Observation brute_force_observe(const CoalitionStructure& truth, const GameStrategyPair& g,
                                const AdversaryPolicy& policy = AdversaryPolicy::first(),
                                std::uint64_t cap = kDefaultBruteForceCap);

/// Expected utility of coalition `block` in auction `g` when agents bid
/// `bids`; the winner is uniform among the highest bidders and the item is
/// reallocated to the block's highest-value member.
double auction_block_utility(const AuctionGame& g, const AgentSet& block,
                             const std::vector<double>& bids);

// ---------------------------------------------------------------------------

struct TranscriptEntry {
  int round;  // 1-based
  GameStrategyPair game;
  Observation observation;
};

struct Transcript {
  std::vector<TranscriptEntry> entries;

  std::size_t size() const { return entries.size(); }
};

/// Holds the hidden coalition structure and answers observation queries.
/// Learners see only n() and observe().
class HiddenOracle {
 public:
  HiddenOracle(CoalitionStructure truth, AdversaryPolicy policy,
               std::uint64_t brute_force_cap = kDefaultBruteForceCap);

  int n() const { return truth_.n(); }
  const AdversaryPolicy& policy() const { return policy_; }
  int rounds_used() const { return static_cast<int>(transcript_.size()); }
  const Transcript& transcript() const { return transcript_; }

  Observation observe(const GameStrategyPair& g);
  Observation observe(FactoredNormalFormGame g) { return observe(GameStrategyPair{std::move(g)}); }
  Observation observe(CongestionGame g) { return observe(GameStrategyPair{std::move(g)}); }
  Observation observe(AuctionGame g) { return observe(GameStrategyPair{std::move(g)}); }

 private:
  CoalitionStructure truth_;
  AdversaryPolicy policy_;
  std::uint64_t cap_;
  Transcript transcript_;
};

/// Evaluates one query without recording it, routing to the fast oracle
/// when the game has a recognized gadget shape and to brute force otherwise.
Observation evaluate_query(const CoalitionStructure& truth, const GameStrategyPair& g,
                           const AdversaryPolicy& policy,
                           std::uint64_t cap = kDefaultBruteForceCap);

}  // namespace csl
