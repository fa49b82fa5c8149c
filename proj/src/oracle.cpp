#include "csl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>

namespace csl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }

std::uint64_t mix_double(std::uint64_t h, double d) {
  return mix(h, std::bit_cast<std::uint64_t>(d));
}

void check_size(const CoalitionStructure& truth, int game_n) {
  if (truth.n() != game_n) {
    throw std::invalid_argument("game has " + std::to_string(game_n) +
                                " agents but the coalition structure has " +
                                std::to_string(truth.n()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

bool Observation::any() const {
  return std::find(bits.begin(), bits.end(), true) != bits.end();
}

AgentSet Observation::deviators() const {
  AgentSet out;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k]) out.push_back(static_cast<AgentId>(k + 1));
  }
  return out;
}

std::string Observation::to_bitstring() const {
  std::string s(bits.size(), '0');
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k]) s[k] = '1';
  }
  return s;
}

Observation Observation::from_bitstring(const std::string& s) {
  Observation o;
  o.bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("observation bits must be 0 or 1");
    o.bits.push_back(c == '1');
  }
  return o;
}

// ---------------------------------------------------------------------------

AdversaryPolicy AdversaryPolicy::parse(const std::string& text) {
  if (text == "first") return first();
  if (text == "last") return last();
  constexpr std::string_view prefix = "seed:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string digits = text.substr(prefix.size());
    if (digits.empty() ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw std::invalid_argument("bad policy seed in '" + text + "'");
    }
    return seeded(std::stoull(digits));
  }
  throw std::invalid_argument("unknown adversary policy '" + text +
                              "' (expected first, last or seed:<n>)");
}

std::vector<AdversaryPolicy> AdversaryPolicy::sweep(int seed_count) {
  std::vector<AdversaryPolicy> out{first(), last()};
  for (int s = 1; s <= seed_count; ++s) out.push_back(seeded(static_cast<std::uint64_t>(s)));
  return out;
}

std::string AdversaryPolicy::name() const {
  switch (kind_) {
    case Kind::first: return "first";
    case Kind::last: return "last";
    case Kind::seeded: return "seed:" + std::to_string(seed_);
  }
  return "?";
}

std::size_t AdversaryPolicy::select(std::size_t option_count, std::uint64_t context) const {
  if (option_count == 0) throw std::invalid_argument("no options to select from");
  switch (kind_) {
    case Kind::first: return 0;
    case Kind::last: return option_count - 1;
    case Kind::seeded: return mix(seed_, context) % option_count;
  }
  return 0;
}

// ---------------------------------------------------------------------------

std::uint64_t game_fingerprint(const GameStrategyPair& g) {
  struct Visitor {
    std::uint64_t operator()(const FactoredNormalFormGame& f) const {
      std::uint64_t h = mix(1, static_cast<std::uint64_t>(f.n()));
      for (const auto& x : f.factors()) {
        h = mix(h, static_cast<std::uint64_t>(x.beneficiary) << 32 |
                       static_cast<std::uint32_t>(x.decider));
      }
      return h;
    }
    std::uint64_t operator()(const CongestionGame& c) const {
      std::uint64_t h = mix(2, static_cast<std::uint64_t>(c.n()));
      for (const auto& cost : c.costs()) h = mix_double(mix_double(h, cost.fixed), cost.per_load);
      for (const auto& space : c.spaces()) {
        h = mix(h, space.size());
        for (const auto& comp : space) {
          h = mix(h, comp.specified);
          for (const auto& opt : comp.options) {
            h = mix(h, opt.size());
            for (int r : opt) h = mix(h, static_cast<std::uint64_t>(r));
          }
        }
      }
      return h;
    }
    std::uint64_t operator()(const AuctionGame& a) const {
      std::uint64_t h = mix(3, static_cast<std::uint64_t>(a.n));
      for (double v : a.valuations) h = mix_double(h, v);
      for (double r : a.reserves) h = mix_double(h, r);
      for (double b : a.bids) h = mix_double(h, b);
      return h;
    }
  };
  return std::visit(Visitor{}, g.game);
}

Observation assemble_observation(const CoalitionStructure& truth,
                                 const std::vector<BlockOutcome>& outcomes,
                                 const AdversaryPolicy& policy, std::uint64_t fingerprint) {
  if (outcomes.size() != truth.block_count()) {
    throw std::invalid_argument("one outcome per coalition required");
  }
  Observation obs;
  obs.bits.assign(static_cast<std::size_t>(truth.n()), false);
  for (std::size_t b = 0; b < outcomes.size(); ++b) {
    const auto& out = outcomes[b];
    if (out.specified_is_best || out.admissible.empty()) continue;
    const auto& block = truth.blocks()[b];
    const std::size_t pick =
        policy.select(out.admissible.size(), mix(fingerprint, static_cast<std::uint64_t>(block.front())));
    for (AgentId a : out.admissible[pick]) obs.bits[a - 1] = true;
  }
  return obs;
}

namespace {

BlockOutcome deviation_outcome(AgentSet deviators) {
  if (deviators.empty()) return {};
  std::sort(deviators.begin(), deviators.end());
  return BlockOutcome{false, {std::move(deviators)}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Prisoner's dilemma products: agent j deviates iff some factor (i, j) has
// i in j's coalition. Best responses are unique, so no policy choice arises.

std::vector<BlockOutcome> factored_outcomes(const CoalitionStructure& truth,
                                            const FactoredNormalFormGame& g) {
  check_size(truth, g.n());
  std::vector<char> deviates(static_cast<std::size_t>(g.n()), 0);
  for (const auto& f : g.factors()) {
    if (truth.same_block(f.beneficiary, f.decider)) deviates[f.decider - 1] = 1;
  }
  std::vector<BlockOutcome> out;
  out.reserve(truth.block_count());
  for (const auto& block : truth.blocks()) {
    AgentSet dev;
    for (AgentId a : block) {
      if (deviates[a - 1]) dev.push_back(a);
    }
    out.push_back(deviation_outcome(std::move(dev)));
  }
  return out;
}

Observation observe_factored(const CoalitionStructure& truth, const FactoredNormalFormGame& g,
                             const AdversaryPolicy& policy) {
  return assemble_observation(truth, factored_outcomes(truth, g), policy,
                              game_fingerprint(GameStrategyPair{g}));
}

// ---------------------------------------------------------------------------

bool is_braess_product(const CongestionGame& g) {
  if (g.braess().size() * 3 != g.resource_count()) return false;
  std::vector<BraessFactor> factors;
  factors.reserve(g.braess().size());
  for (std::size_t k = 0; k < g.braess().size(); ++k) {
    if (g.braess()[k].first_resource != static_cast<int>(3 * k)) return false;
    factors.push_back(g.braess()[k].factor);
  }
  try {
    return braess_product(g.n(), factors) == g;
  } catch (const std::exception&) {
    return false;
  }
}

// Resources of distinct gadgets are disjoint and utilities add up, so the
// coalition's decision splits into one comparison per gadget: the decider
// either keeps {r1, r3} or switches to {r2}, with the beneficiary on {r1}.
std::vector<BlockOutcome> braess_outcomes(const CoalitionStructure& truth,
                                          const CongestionGame& g) {
  check_size(truth, g.n());
  if (!is_braess_product(g)) {
    throw std::invalid_argument("congestion game is not a product of Braess gadgets");
  }
  const auto& costs = g.costs();
  std::vector<char> deviates(static_cast<std::size_t>(g.n()), 0);
  for (const auto& p : g.braess()) {
    const int r1 = p.first_resource, r2 = r1 + 1, r3 = r1 + 2;
    const bool shared = truth.same_block(p.factor.beneficiary, p.factor.decider);
    auto coalition_cost = [&](bool take_r2) {
      const int load_r1 = take_r2 ? 1 : 2;
      const double decider = take_r2 ? costs[r2](1) : costs[r1](load_r1) + costs[r3](1);
      const double beneficiary = shared ? costs[r1](load_r1) : 0.0;
      return decider + beneficiary;
    };
    if (coalition_cost(true) < coalition_cost(false)) deviates[p.factor.decider - 1] = 1;
  }
  std::vector<BlockOutcome> out;
  out.reserve(truth.block_count());
  for (const auto& block : truth.blocks()) {
    AgentSet dev;
    for (AgentId a : block) {
      if (deviates[a - 1]) dev.push_back(a);
    }
    out.push_back(deviation_outcome(std::move(dev)));
  }
  return out;
}

Observation observe_braess(const CoalitionStructure& truth, const CongestionGame& g,
                           const AdversaryPolicy& policy) {
  return assemble_observation(truth, braess_outcomes(truth, g), policy,
                              game_fingerprint(GameStrategyPair{g}));
}

// ---------------------------------------------------------------------------
// Auctions. In A(X, Y, Z) a coalition meeting both X and Y profits by having
// exactly one Y member outbid the zero bids (price 0) and reallocating the
// item to its X member; any Y member may be the one. In the first-move game
// any single member may raise its bid.

std::vector<BlockOutcome> auction_outcomes(const CoalitionStructure& truth,
                                           const AuctionGame& g) {
  g.validate();
  check_size(truth, g.n);
  const AuctionShape shape = classify(g);
  if (shape == AuctionShape::other) {
    throw std::invalid_argument("auction is neither a gadget nor the first-move game");
  }
  std::vector<BlockOutcome> out;
  out.reserve(truth.block_count());
  for (const auto& block : truth.blocks()) {
    BlockOutcome o;
    if (shape == AuctionShape::first_move) {
      for (AgentId a : block) o.admissible.push_back({a});
    } else {
      bool meets_x = false;
      AgentSet in_y;
      for (AgentId a : block) {
        if (g.valuations[a - 1] == 1.0) meets_x = true;
        else if (g.reserves[a - 1] == 0.0) in_y.push_back(a);
      }
      if (meets_x) {
        for (AgentId a : in_y) o.admissible.push_back({a});
      }
    }
    o.specified_is_best = o.admissible.empty();
    out.push_back(std::move(o));
  }
  return out;
}

Observation observe_auction(const CoalitionStructure& truth, const AuctionGame& g,
                            const AdversaryPolicy& policy) {
  if (classify(g) == AuctionShape::other) {
    return brute_force_observe(truth, GameStrategyPair{g}, policy);
  }
  return assemble_observation(truth, auction_outcomes(truth, g), policy,
                              game_fingerprint(GameStrategyPair{g}));
}

// ---------------------------------------------------------------------------

Observation evaluate_query(const CoalitionStructure& truth, const GameStrategyPair& g,
                           const AdversaryPolicy& policy, std::uint64_t cap) {
  check_size(truth, g.n());
  if (const auto* f = std::get_if<FactoredNormalFormGame>(&g.game)) {
    return observe_factored(truth, *f, policy);
  }
  if (const auto* c = std::get_if<CongestionGame>(&g.game)) {
    if (is_braess_product(*c)) return observe_braess(truth, *c, policy);
    return brute_force_observe(truth, g, policy, cap);
  }
  const auto& a = std::get<AuctionGame>(g.game);
  if (classify(a) != AuctionShape::other) return observe_auction(truth, a, policy);
  return brute_force_observe(truth, g, policy, cap);
}

HiddenOracle::HiddenOracle(CoalitionStructure truth, AdversaryPolicy policy,
                           std::uint64_t brute_force_cap)
    : truth_(std::move(truth)), policy_(policy), cap_(brute_force_cap) {}

Observation HiddenOracle::observe(const GameStrategyPair& g) {
  Observation obs = evaluate_query(truth_, g, policy_, cap_);
  transcript_.entries.push_back(TranscriptEntry{rounds_used() + 1, g, obs});
  return obs;
}

}  // namespace csl
