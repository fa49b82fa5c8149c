// Reference oracle: enumerate every joint strategy of each coalition against
// the fixed outside profile and read deviations off the argmax set.

#include <algorithm>
#include <functional>
#include <iterator>
#include <limits>
#include <set>
#include <stdexcept>

#include "csl/oracle.hpp"

namespace csl {

namespace {

constexpr double kTieTolerance = 1e-9;

// Mixed-radix enumeration over per-dimension choice counts. `evaluate`
// returns the coalition's utility; `deviators` maps a choice vector to the
// members whose strategy differs from the specified one.
BlockOutcome enumerate_block(const std::vector<std::size_t>& radices,
                             const std::vector<std::size_t>& specified, std::uint64_t cap,
                             const std::function<double(const std::vector<std::size_t>&)>& evaluate,
                             const std::function<AgentSet(const std::vector<std::size_t>&)>& deviators) {
  std::uint64_t total = 1;
  for (std::size_t r : radices) {
    if (r == 0) throw std::invalid_argument("empty strategy dimension");
    if (total > cap / r) {
      throw std::length_error("joint strategy space of a coalition exceeds the brute-force cap");
    }
    total *= r;
  }

  std::vector<std::size_t> choice(radices.size(), 0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::size_t>> argmax;
  for (std::uint64_t step = 0; step < total; ++step) {
    const double u = evaluate(choice);
    if (u > best + kTieTolerance) {
      best = u;
      argmax.clear();
      argmax.push_back(choice);
    } else if (u >= best - kTieTolerance) {
      argmax.push_back(choice);
    }
    for (std::size_t d = 0; d < radices.size(); ++d) {
      if (++choice[d] < radices[d]) break;
      choice[d] = 0;
    }
  }

  BlockOutcome out;
  if (evaluate(specified) >= best - kTieTolerance) return out;  // specified profile wins ties
  out.specified_is_best = false;
  std::set<AgentSet> patterns;
  for (const auto& c : argmax) patterns.insert(deviators(c));
  out.admissible.assign(patterns.begin(), patterns.end());
  return out;
}

BlockOutcome factored_block(const FactoredNormalFormGame& g, const AgentSet& block,
                            std::uint64_t cap) {
  // One binary dimension per factor whose decider belongs to the block.
  std::vector<std::size_t> dims;
  for (std::size_t x = 0; x < g.factors().size(); ++x) {
    if (std::binary_search(block.begin(), block.end(), g.factors()[x].decider)) dims.push_back(x);
  }
  std::vector<PdAction> actions(g.factors().size(), PdAction::defect);
  auto apply = [&](const std::vector<std::size_t>& c) {
    for (std::size_t k = 0; k < dims.size(); ++k) {
      actions[dims[k]] = c[k] ? PdAction::cooperate : PdAction::defect;
    }
  };
  auto evaluate = [&](const std::vector<std::size_t>& c) {
    apply(c);
    double u = 0.0;
    for (AgentId a : block) u += factored_utility(g, a, actions);
    return u;
  };
  auto deviators = [&](const std::vector<std::size_t>& c) {
    AgentSet dev;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (c[k]) dev.push_back(g.factors()[dims[k]].decider);
    }
    std::sort(dev.begin(), dev.end());
    dev.erase(std::unique(dev.begin(), dev.end()), dev.end());
    return dev;
  };
  return enumerate_block(std::vector<std::size_t>(dims.size(), 2),
                         std::vector<std::size_t>(dims.size(), 0), cap, evaluate, deviators);
}

BlockOutcome congestion_block(const CongestionGame& g, const AgentSet& block,
                              std::uint64_t cap) {
  struct Dim {
    AgentId agent;
    std::size_t component;
  };
  std::vector<Dim> dims;
  std::vector<std::size_t> radices, specified;
  for (AgentId a : block) {
    const auto& comps = g.components(a);
    for (std::size_t k = 0; k < comps.size(); ++k) {
      dims.push_back({a, k});
      radices.push_back(comps[k].options.size());
      specified.push_back(comps[k].specified);
    }
  }
  CongestionProfile profile = specified_profile(g);
  auto apply = [&](const std::vector<std::size_t>& c) {
    for (std::size_t k = 0; k < dims.size(); ++k) {
      profile[dims[k].agent - 1][dims[k].component] = c[k];
    }
  };
  auto evaluate = [&](const std::vector<std::size_t>& c) {
    apply(c);
    const auto loads = resource_loads(g, profile);
    double u = 0.0;
    for (AgentId a : block) {
      for (int r : resources_of(g, a, profile[a - 1])) u -= g.costs()[r](loads[r]);
    }
    return u;
  };
  auto deviators = [&](const std::vector<std::size_t>& c) {
    AgentSet dev;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (c[k] != specified[k] &&
          (dev.empty() || dev.back() != dims[k].agent)) {
        dev.push_back(dims[k].agent);
      }
    }
    return dev;
  };
  return enumerate_block(radices, specified, cap, evaluate, deviators);
}

BlockOutcome auction_block(const AuctionGame& g, const AgentSet& block, std::uint64_t cap) {
  std::vector<double> bids = g.bids;
  // The specified bid is enumerated as its own grid point when it is off-grid.
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> radices, specified;
  for (AgentId a : block) {
    std::vector<double> v(std::begin(kAuctionBidGrid), std::end(kAuctionBidGrid));
    auto it = std::find(v.begin(), v.end(), g.bids[a - 1]);
    if (it == v.end()) {
      v.push_back(g.bids[a - 1]);
      it = std::prev(v.end());
    }
    specified.push_back(static_cast<std::size_t>(it - v.begin()));
    radices.push_back(v.size());
    values.push_back(std::move(v));
  }
  auto evaluate = [&](const std::vector<std::size_t>& c) {
    for (std::size_t k = 0; k < block.size(); ++k) bids[block[k] - 1] = values[k][c[k]];
    return auction_block_utility(g, block, bids);
  };
  auto deviators = [&](const std::vector<std::size_t>& c) {
    AgentSet dev;
    for (std::size_t k = 0; k < block.size(); ++k) {
      if (c[k] != specified[k]) dev.push_back(block[k]);
    }
    return dev;
  };
  return enumerate_block(radices, specified, cap, evaluate, deviators);
}

}  // namespace

double auction_block_utility(const AuctionGame& g, const AgentSet& block,
                             const std::vector<double>& bids) {
  const double top = *std::max_element(bids.begin(), bids.end());
  AgentSet winners;
  for (AgentId a = 1; a <= g.n; ++a) {
    if (bids[a - 1] == top) winners.push_back(a);
  }
  double second = 0.0;
  if (winners.size() >= 2) {
    second = top;
  } else {
    for (AgentId a = 1; a <= g.n; ++a) {
      if (a != winners.front()) second = std::max(second, bids[a - 1]);
    }
  }
  double block_value = 0.0;
  for (AgentId a : block) block_value = std::max(block_value, g.valuations[a - 1]);

  const double p = 1.0 / static_cast<double>(winners.size());
  double expected = 0.0;
  for (AgentId w : winners) {
    if (!std::binary_search(block.begin(), block.end(), w)) continue;
    const double reserve = g.reserves[w - 1];
    if (!(bids[w - 1] > reserve)) continue;  // not allocated
    const double price = std::max(second, reserve);
    expected += p * (block_value - price);
  }
  return expected;
}

std::vector<BlockOutcome> brute_force_outcomes(const CoalitionStructure& truth,
                                               const GameStrategyPair& g, std::uint64_t cap) {
  if (truth.n() != g.n()) {
    throw std::invalid_argument("game and coalition structure differ in population size");
  }
  std::vector<BlockOutcome> out;
  out.reserve(truth.block_count());
  for (const auto& block : truth.blocks()) {
    if (const auto* f = std::get_if<FactoredNormalFormGame>(&g.game)) {
      out.push_back(factored_block(*f, block, cap));
    } else if (const auto* c = std::get_if<CongestionGame>(&g.game)) {
      out.push_back(congestion_block(*c, block, cap));
    } else {
      const auto& a = std::get<AuctionGame>(g.game);
      a.validate();
      out.push_back(auction_block(a, block, cap));
    }
  }
  return out;
}

Observation brute_force_observe(const CoalitionStructure& truth, const GameStrategyPair& g,
                                const AdversaryPolicy& policy, std::uint64_t cap) {
  return assemble_observation(truth, brute_force_outcomes(truth, g, cap), policy,
                              game_fingerprint(g));
}

}  // namespace csl
