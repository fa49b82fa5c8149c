#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "csl/core.hpp"

namespace csl {

// ---------------------------------------------------------------------------
// Factored normal-form games built from directed prisoner's dilemmas.

enum class PdAction : std::uint8_t { cooperate, defect };

/// Directed prisoner's dilemma P(i, j): the decider j may cooperate, which
/// pays the beneficiary i +2 and costs j 1. Everyone else only defects.
struct PrisonerDilemmaFactor {
  static constexpr double kBeneficiaryPayoff = 2.0;
  static constexpr double kDeciderPayoff = -1.0;

  AgentId beneficiary;
  AgentId decider;

  friend bool operator==(const PrisonerDilemmaFactor&,
                         const PrisonerDilemmaFactor&) = default;
};

/// Product of directed prisoner's dilemmas stored as its factor list. The
/// payoff tensor is never materialized; utilities are sums over factors.
class FactoredNormalFormGame {
 public:
  FactoredNormalFormGame() = default;
  FactoredNormalFormGame(int n, std::vector<PrisonerDilemmaFactor> factors);

  int n() const { return n_; }
  const std::vector<PrisonerDilemmaFactor>& factors() const { return factors_; }

  friend bool operator==(const FactoredNormalFormGame&,
                         const FactoredNormalFormGame&) = default;

 private:
  int n_ = 0;
  std::vector<PrisonerDilemmaFactor> factors_;
};

FactoredNormalFormGame prisoner_dilemma(int n, AgentId beneficiary, AgentId decider);
FactoredNormalFormGame product(std::span<const FactoredNormalFormGame> games);
FactoredNormalFormGame product(std::initializer_list<FactoredNormalFormGame> games);
/// Same, with the population given explicitly so an empty product is allowed.
FactoredNormalFormGame product(int n, std::span<const FactoredNormalFormGame> games);
/// One factor P(i, j) for every i < j.
FactoredNormalFormGame all_pairs_game(int n);

/// Utility of `agent` when factor x is played with actions[x] by its decider.
double factored_utility(const FactoredNormalFormGame& g, AgentId agent,
                        std::span<const PdAction> actions);

// ---------------------------------------------------------------------------
// Congestion games.

/// Affine resource cost c(load) = fixed + per_load * load.
struct ResourceCost {
  double fixed = 0.0;
  double per_load = 0.0;

  double operator()(int load) const { return fixed + per_load * load; }
  friend bool operator==(const ResourceCost&, const ResourceCost&) = default;
};

using ResourceSet = std::vector<int>;

/// One coordinate of an agent's strategy space. A product game gives each
/// agent one component per factor; the agent's strategy is one option per
/// component and its resource set is the union of the chosen options.
struct StrategyComponent {
  std::vector<ResourceSet> options;
  std::size_t specified = 0;

  friend bool operator==(const StrategyComponent&, const StrategyComponent&) = default;
};

/// Directed Braess's paradox B(i, j).
struct BraessFactor {
  AgentId beneficiary;
  AgentId decider;

  friend bool operator==(const BraessFactor&, const BraessFactor&) = default;
};

/// Where a Braess gadget's resources r1, r2, r3 live inside a product game.
struct BraessPlacement {
  BraessFactor factor;
  int first_resource;  // r1; r2 and r3 follow

  friend bool operator==(const BraessPlacement&, const BraessPlacement&) = default;
};

class CongestionGame {
 public:
  CongestionGame() = default;
  CongestionGame(int n, std::vector<ResourceCost> costs,
                 std::vector<std::vector<StrategyComponent>> spaces,
                 std::vector<BraessPlacement> braess = {});

  int n() const { return n_; }
  std::size_t resource_count() const { return costs_.size(); }
  const std::vector<ResourceCost>& costs() const { return costs_; }
  const std::vector<StrategyComponent>& components(AgentId i) const {
    return spaces_.at(static_cast<std::size_t>(i - 1));
  }
  const std::vector<std::vector<StrategyComponent>>& spaces() const { return spaces_; }
  /// Non-empty only for games assembled from Braess gadgets.
  const std::vector<BraessPlacement>& braess() const { return braess_; }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
  bool is_valid() const noexcept;

  friend bool operator==(const CongestionGame&, const CongestionGame&) = default;

 private:
  int n_ = 0;
  std::vector<ResourceCost> costs_;
  std::vector<std::vector<StrategyComponent>> spaces_;
  std::vector<BraessPlacement> braess_;
};

/// choice[i-1][k] selects an option of agent i's k-th component.
using CongestionProfile = std::vector<std::vector<std::size_t>>;

CongestionProfile specified_profile(const CongestionGame& g);
ResourceSet resources_of(const CongestionGame& g, AgentId i,
                         std::span<const std::size_t> choice);
std::vector<int> resource_loads(const CongestionGame& g, const CongestionProfile& p);
/// u_i = -sum over r in sigma_i of c_r(load_r).
double congestion_utility(const CongestionGame& g, const CongestionProfile& p,
                          AgentId i);

CongestionGame braess(int n, AgentId beneficiary, AgentId decider);
/// Single congestion game equal to the product of B(i_x, j_x) over `factors`.
CongestionGame braess_product(int n, std::span<const BraessFactor> factors);
/// Product of arbitrary congestion games: disjoint union of resources and
/// per-agent concatenation of strategy components.
CongestionGame congestion_product(std::span<const CongestionGame> games);

// ---------------------------------------------------------------------------
// Graphical view of factored games.

struct GraphicalGameView {
  FactoredNormalFormGame underlying;
  std::vector<std::pair<AgentId, AgentId>> edges;  // unordered, (low, high), sorted
  int max_degree = 0;
};

GraphicalGameView graphical_view(const FactoredNormalFormGame& g);

// ---------------------------------------------------------------------------
// Second-price auctions with personalized reserves.

struct AuctionGame {
  int n = 0;
  std::vector<double> valuations;
  std::vector<double> reserves;
  std::vector<double> bids;  // specified profile

  void validate() const;
  friend bool operator==(const AuctionGame&, const AuctionGame&) = default;
};

/// v = 1 on X, r = 0 on Y, everything else v = 0 / r = 1; all bids 0.
AuctionGame auction_gadget(int n, const AgentSet& x, const AgentSet& y, const AgentSet& z);
/// v = 1, r = 0, bids 0 for everyone.
AuctionGame first_move_game(int n);

enum class AuctionShape { gadget, first_move, other };

AuctionShape classify(const AuctionGame& g);

struct GadgetParts {
  AgentSet x, y, z;
};
/// Recovers (X, Y, Z) from a gadget-shaped auction.
GadgetParts gadget_parts(const AuctionGame& g);

// ---------------------------------------------------------------------------

/// A game with its specified strategy profile. Graphical games are factored
/// normal-form games whose degree is checked through graphical_view.
struct GameStrategyPair {
  std::variant<FactoredNormalFormGame, CongestionGame, AuctionGame> game;

  int n() const;
  friend bool operator==(const GameStrategyPair&, const GameStrategyPair&) = default;
};

}  // namespace csl
