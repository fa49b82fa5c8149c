#include "csl/games.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace csl {

namespace {

void check_population(int n) {
  if (n < 1) throw std::invalid_argument("population size must be at least 1");
}

void check_agent(int n, AgentId a) {
  if (a < 1 || a > n) {
    throw std::out_of_range("agent " + std::to_string(a) + " outside 1.." +
                            std::to_string(n));
  }
}

void check_pair(int n, AgentId beneficiary, AgentId decider) {
  check_agent(n, beneficiary);
  check_agent(n, decider);
  if (beneficiary == decider) {
    throw std::invalid_argument("gadget pair needs two distinct agents, got (" +
                                std::to_string(beneficiary) + ", " +
                                std::to_string(decider) + ")");
  }
}

std::uint64_t pair_key(AgentId a, AgentId b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

// ---------------------------------------------------------------------------

FactoredNormalFormGame::FactoredNormalFormGame(int n,
                                               std::vector<PrisonerDilemmaFactor> factors)
    : n_(n), factors_(std::move(factors)) {
  check_population(n);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(factors_.size() * 2);
  for (const auto& f : factors_) {
    check_pair(n, f.beneficiary, f.decider);
    if (!seen.insert(pair_key(f.beneficiary, f.decider)).second) {
      throw std::invalid_argument("duplicate factor P(" + std::to_string(f.beneficiary) +
                                  ", " + std::to_string(f.decider) + ")");
    }
  }
}

FactoredNormalFormGame prisoner_dilemma(int n, AgentId beneficiary, AgentId decider) {
  return FactoredNormalFormGame(n, {{beneficiary, decider}});
}

FactoredNormalFormGame product(std::span<const FactoredNormalFormGame> games) {
  if (games.empty()) {
    throw std::invalid_argument("product of zero games has no population size");
  }
  return product(games.front().n(), games);
}

FactoredNormalFormGame product(int n, std::span<const FactoredNormalFormGame> games) {
  check_population(n);
  std::vector<PrisonerDilemmaFactor> factors;
  for (const auto& g : games) {
    if (g.n() != n) throw std::invalid_argument("product operands differ in population size");
    factors.insert(factors.end(), g.factors().begin(), g.factors().end());
  }
  return FactoredNormalFormGame(n, std::move(factors));
}

FactoredNormalFormGame product(std::initializer_list<FactoredNormalFormGame> games) {
  return product(std::span<const FactoredNormalFormGame>(games.begin(), games.size()));
}

FactoredNormalFormGame all_pairs_game(int n) {
  check_population(n);
  std::vector<PrisonerDilemmaFactor> factors;
  factors.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (AgentId j = 2; j <= n; ++j) {
    for (AgentId i = 1; i < j; ++i) factors.push_back({i, j});
  }
  return FactoredNormalFormGame(n, std::move(factors));
}

double factored_utility(const FactoredNormalFormGame& g, AgentId agent,
                        std::span<const PdAction> actions) {
  if (actions.size() != g.factors().size()) {
    throw std::invalid_argument("one action per factor required");
  }
  double u = 0.0;
  for (std::size_t x = 0; x < actions.size(); ++x) {
    if (actions[x] != PdAction::cooperate) continue;
    const auto& f = g.factors()[x];
    if (f.beneficiary == agent) u += PrisonerDilemmaFactor::kBeneficiaryPayoff;
    if (f.decider == agent) u += PrisonerDilemmaFactor::kDeciderPayoff;
  }
  return u;
}

// ---------------------------------------------------------------------------

CongestionGame::CongestionGame(int n, std::vector<ResourceCost> costs,
                               std::vector<std::vector<StrategyComponent>> spaces,
                               std::vector<BraessPlacement> braess)
    : n_(n), costs_(std::move(costs)), spaces_(std::move(spaces)),
      braess_(std::move(braess)) {
  validate();
}

void CongestionGame::validate() const {
  check_population(n_);
  if (spaces_.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("congestion game needs one strategy space per agent");
  }
  const int resources = static_cast<int>(costs_.size());
  for (std::size_t a = 0; a < spaces_.size(); ++a) {
    const std::string who = "agent " + std::to_string(a + 1);
    if (spaces_[a].empty()) throw std::invalid_argument(who + " has an empty strategy space");
    for (const auto& comp : spaces_[a]) {
      if (comp.options.empty()) {
        throw std::invalid_argument(who + " has an empty strategy component");
      }
      if (comp.specified >= comp.options.size()) {
        throw std::invalid_argument(who + "'s specified strategy is outside its space");
      }
      for (const auto& opt : comp.options) {
        if (!std::is_sorted(opt.begin(), opt.end()) ||
            std::adjacent_find(opt.begin(), opt.end()) != opt.end()) {
          throw std::invalid_argument(who + " has a malformed resource set");
        }
        for (int r : opt) {
          if (r < 0 || r >= resources) {
            throw std::invalid_argument(who + " references unknown resource " +
                                        std::to_string(r));
          }
        }
      }
    }
  }
  for (const auto& p : braess_) {
    check_pair(n_, p.factor.beneficiary, p.factor.decider);
    if (p.first_resource < 0 || p.first_resource + 3 > resources) {
      throw std::invalid_argument("Braess placement outside the resource range");
    }
  }
}

bool CongestionGame::is_valid() const noexcept {
  try {
    validate();
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

CongestionProfile specified_profile(const CongestionGame& g) {
  CongestionProfile p(static_cast<std::size_t>(g.n()));
  for (AgentId i = 1; i <= g.n(); ++i) {
    for (const auto& comp : g.components(i)) p[i - 1].push_back(comp.specified);
  }
  return p;
}

ResourceSet resources_of(const CongestionGame& g, AgentId i,
                         std::span<const std::size_t> choice) {
  const auto& comps = g.components(i);
  if (choice.size() != comps.size()) {
    throw std::invalid_argument("one choice per strategy component required");
  }
  ResourceSet out;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& opt = comps[k].options.at(choice[k]);
    out.insert(out.end(), opt.begin(), opt.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> resource_loads(const CongestionGame& g, const CongestionProfile& p) {
  std::vector<int> loads(g.resource_count(), 0);
  for (AgentId i = 1; i <= g.n(); ++i) {
    for (int r : resources_of(g, i, p.at(i - 1))) ++loads[r];
  }
  return loads;
}

double congestion_utility(const CongestionGame& g, const CongestionProfile& p, AgentId i) {
  const auto loads = resource_loads(g, p);
  double cost = 0.0;
  for (int r : resources_of(g, i, p.at(i - 1))) cost += g.costs()[r](loads[r]);
  return -cost;
}

namespace {

// r1: c(x) = x, r2: c(x) = 2.5, r3: c(x) = 0.
constexpr ResourceCost kBraessCosts[3] = {{0.0, 1.0}, {2.5, 0.0}, {0.0, 0.0}};

StrategyComponent empty_component() { return StrategyComponent{{ResourceSet{}}, 0}; }

bool is_placeholder(const StrategyComponent& c) {
  return c.options.size() == 1 && c.options.front().empty();
}

// Bystanders of every factor keep the degenerate {empty} strategy space.
void fill_bystanders(std::vector<std::vector<StrategyComponent>>& spaces) {
  for (auto& s : spaces) {
    if (s.empty()) s.push_back(empty_component());
  }
}

}  // namespace

CongestionGame braess(int n, AgentId beneficiary, AgentId decider) {
  const BraessFactor f{beneficiary, decider};
  return braess_product(n, std::span<const BraessFactor>(&f, 1));
}

CongestionGame braess_product(int n, std::span<const BraessFactor> factors) {
  check_population(n);
  std::vector<ResourceCost> costs;
  costs.reserve(factors.size() * 3);
  std::vector<std::vector<StrategyComponent>> spaces(static_cast<std::size_t>(n));
  std::vector<BraessPlacement> placements;
  placements.reserve(factors.size());
  std::unordered_set<std::uint64_t> seen;
  for (const auto& f : factors) {
    check_pair(n, f.beneficiary, f.decider);
    if (!seen.insert(pair_key(f.beneficiary, f.decider)).second) {
      throw std::invalid_argument("duplicate factor B(" + std::to_string(f.beneficiary) +
                                  ", " + std::to_string(f.decider) + ")");
    }
    const int r1 = static_cast<int>(costs.size());
    costs.insert(costs.end(), std::begin(kBraessCosts), std::end(kBraessCosts));
    spaces[f.beneficiary - 1].push_back(StrategyComponent{{ResourceSet{r1}}, 0});
    spaces[f.decider - 1].push_back(
        StrategyComponent{{ResourceSet{r1 + 1}, ResourceSet{r1, r1 + 2}}, 1});
    placements.push_back({f, r1});
  }
  fill_bystanders(spaces);
  return CongestionGame(n, std::move(costs), std::move(spaces), std::move(placements));
}

CongestionGame congestion_product(std::span<const CongestionGame> games) {
  if (games.empty()) {
    throw std::invalid_argument("product of zero games has no population size");
  }
  const int n = games.front().n();
  std::vector<ResourceCost> costs;
  std::vector<std::vector<StrategyComponent>> spaces(static_cast<std::size_t>(n));
  std::vector<BraessPlacement> placements;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& g : games) {
    if (g.n() != n) throw std::invalid_argument("product operands differ in population size");
    const int offset = static_cast<int>(costs.size());
    costs.insert(costs.end(), g.costs().begin(), g.costs().end());
    for (AgentId i = 1; i <= n; ++i) {
      for (auto comp : g.components(i)) {
        if (is_placeholder(comp)) continue;
        for (auto& opt : comp.options) {
          for (int& r : opt) r += offset;
        }
        spaces[i - 1].push_back(std::move(comp));
      }
    }
    for (auto p : g.braess()) {
      if (!seen.insert(pair_key(p.factor.beneficiary, p.factor.decider)).second) {
        throw std::invalid_argument("duplicate factor B(" +
                                    std::to_string(p.factor.beneficiary) + ", " +
                                    std::to_string(p.factor.decider) + ")");
      }
      p.first_resource += offset;
      placements.push_back(p);
    }
  }
  fill_bystanders(spaces);
  return CongestionGame(n, std::move(costs), std::move(spaces), std::move(placements));
}

// ---------------------------------------------------------------------------

GraphicalGameView graphical_view(const FactoredNormalFormGame& g) {
  GraphicalGameView view;
  view.underlying = g;
  std::vector<int> occurrences(static_cast<std::size_t>(g.n()), 0);
  std::set<std::pair<AgentId, AgentId>> edges;
  for (const auto& f : g.factors()) {
    ++occurrences[f.beneficiary - 1];
    ++occurrences[f.decider - 1];
    edges.insert(std::minmax(f.beneficiary, f.decider));
  }
  view.edges.assign(edges.begin(), edges.end());
  view.max_degree =
      occurrences.empty() ? 0 : *std::max_element(occurrences.begin(), occurrences.end());
  return view;
}

// ---------------------------------------------------------------------------

void AuctionGame::validate() const {
  check_population(n);
  const auto sz = static_cast<std::size_t>(n);
  if (valuations.size() != sz || reserves.size() != sz || bids.size() != sz) {
    throw std::invalid_argument("auction vectors must all have length n");
  }
  for (std::size_t k = 0; k < sz; ++k) {
    if (!(valuations[k] >= 0.0 && valuations[k] <= 1.0)) {
      throw std::invalid_argument("valuations must lie in [0, 1]");
    }
    if (!(reserves[k] >= 0.0 && reserves[k] <= 1.0)) {
      throw std::invalid_argument("reserves must lie in [0, 1]");
    }
    if (!(bids[k] >= 0.0)) throw std::invalid_argument("bids must be nonnegative");
  }
}

AuctionGame auction_gadget(int n, const AgentSet& x, const AgentSet& y, const AgentSet& z) {
  check_population(n);
  enum Part : char { none, in_x, in_y, in_z };
  std::vector<char> part(static_cast<std::size_t>(n), none);
  auto assign = [&](const AgentSet& s, Part p) {
    for (AgentId a : s) {
      check_agent(n, a);
      if (part[a - 1] != none) {
        throw std::invalid_argument("gadget sets overlap at agent " + std::to_string(a));
      }
      part[a - 1] = p;
    }
  };
  assign(x, in_x);
  assign(y, in_y);
  assign(z, in_z);
  AuctionGame g;
  g.n = n;
  g.valuations.resize(part.size());
  g.reserves.resize(part.size());
  g.bids.assign(part.size(), 0.0);
  for (std::size_t k = 0; k < part.size(); ++k) {
    if (part[k] == none) {
      throw std::invalid_argument("gadget sets do not cover agent " + std::to_string(k + 1));
    }
    g.valuations[k] = part[k] == in_x ? 1.0 : 0.0;
    g.reserves[k] = part[k] == in_y ? 0.0 : 1.0;
  }
  return g;
}

AuctionGame first_move_game(int n) {
  check_population(n);
  const auto sz = static_cast<std::size_t>(n);
  return AuctionGame{n, std::vector<double>(sz, 1.0), std::vector<double>(sz, 0.0),
                     std::vector<double>(sz, 0.0)};
}

AuctionShape classify(const AuctionGame& g) {
  bool all_first_move = true;
  bool all_gadget = true;
  for (std::size_t k = 0; k < static_cast<std::size_t>(g.n); ++k) {
    const double v = g.valuations[k], r = g.reserves[k], b = g.bids[k];
    if (b != 0.0) return AuctionShape::other;
    const bool first = v == 1.0 && r == 0.0;
    const bool gadget = (v == 1.0 && r == 1.0) || (v == 0.0 && (r == 0.0 || r == 1.0));
    all_first_move = all_first_move && first;
    all_gadget = all_gadget && gadget;
  }
  if (all_first_move) return AuctionShape::first_move;
  if (all_gadget) return AuctionShape::gadget;
  return AuctionShape::other;
}

GadgetParts gadget_parts(const AuctionGame& g) {
  if (classify(g) != AuctionShape::gadget) {
    throw std::invalid_argument("auction is not an A(X, Y, Z) gadget");
  }
  GadgetParts parts;
  for (AgentId a = 1; a <= g.n; ++a) {
    if (g.valuations[a - 1] == 1.0) {
      parts.x.push_back(a);
    } else if (g.reserves[a - 1] == 0.0) {
      parts.y.push_back(a);
    } else {
      parts.z.push_back(a);
    }
  }
  return parts;
}

// ---------------------------------------------------------------------------

int GameStrategyPair::n() const {
  return std::visit(
      [](const auto& g) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, AuctionGame>) {
          return g.n;
        } else {
          return g.n();
        }
      },
      game);
}

}  // namespace csl
