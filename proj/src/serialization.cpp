#include "csl/serialization.hpp"

#include <algorithm>
#include <stdexcept>

namespace csl {

Json to_json(const CoalitionStructure& s) {
  Json out = Json::array();
  for (const auto& b : s.blocks()) out.push_back(b);
  return out;
}

CoalitionStructure coalition_from_json(const Json& j, std::optional<int> n) {
  if (!j.is_array()) throw std::invalid_argument("coalition structure must be a JSON array");
  std::vector<AgentSet> blocks;
  int largest = 0;
  for (const auto& b : j) {
    if (!b.is_array()) throw std::invalid_argument("each block must be a JSON array");
    AgentSet block = b.get<AgentSet>();
    for (AgentId a : block) largest = std::max(largest, a);
    blocks.push_back(std::move(block));
  }
  return CoalitionStructure(n.value_or(largest), std::move(blocks));
}

namespace {

Json game_json(const FactoredNormalFormGame& g) {
  Json factors = Json::array();
  for (const auto& f : g.factors()) factors.push_back({f.beneficiary, f.decider});
  return {{"family", "normal_form"}, {"n", g.n()}, {"factors", std::move(factors)}};
}

Json game_json(const CongestionGame& g) {
  Json out{{"family", "congestion"}, {"n", g.n()}};
  if (is_braess_product(g)) {
    Json factors = Json::array();
    for (const auto& p : g.braess()) factors.push_back({p.factor.beneficiary, p.factor.decider});
    out["braess"] = std::move(factors);
    return out;
  }
  Json costs = Json::array();
  for (const auto& c : g.costs()) costs.push_back({c.fixed, c.per_load});
  Json spaces = Json::array();
  for (const auto& space : g.spaces()) {
    Json comps = Json::array();
    for (const auto& comp : space) {
      comps.push_back({{"options", comp.options}, {"specified", comp.specified}});
    }
    spaces.push_back(std::move(comps));
  }
  out["costs"] = std::move(costs);
  out["spaces"] = std::move(spaces);
  return out;
}

Json game_json(const AuctionGame& g) {
  return {{"family", "auction"}, {"n", g.n}, {"v", g.valuations}, {"r", g.reserves},
          {"bids", g.bids}};
}

}  // namespace

Json to_json(const GameStrategyPair& g) {
  return std::visit([](const auto& game) { return game_json(game); }, g.game);
}

GameStrategyPair game_from_json(const Json& j) {
  const std::string family = j.at("family").get<std::string>();
  const int n = j.at("n").get<int>();
  if (family == "normal_form" || family == "graphical") {
    std::vector<PrisonerDilemmaFactor> factors;
    for (const auto& f : j.at("factors")) factors.push_back({f.at(0).get<int>(), f.at(1).get<int>()});
    return {FactoredNormalFormGame(n, std::move(factors))};
  }
  if (family == "congestion") {
    if (j.contains("braess")) {
      std::vector<BraessFactor> factors;
      for (const auto& f : j.at("braess")) factors.push_back({f.at(0).get<int>(), f.at(1).get<int>()});
      return {braess_product(n, factors)};
    }
    std::vector<ResourceCost> costs;
    for (const auto& c : j.at("costs")) costs.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    std::vector<std::vector<StrategyComponent>> spaces;
    for (const auto& space : j.at("spaces")) {
      std::vector<StrategyComponent> comps;
      for (const auto& comp : space) {
        comps.push_back({comp.at("options").get<std::vector<ResourceSet>>(),
                         comp.at("specified").get<std::size_t>()});
      }
      spaces.push_back(std::move(comps));
    }
    return {CongestionGame(n, std::move(costs), std::move(spaces))};
  }
  if (family == "auction") {
    AuctionGame a{n, j.at("v").get<std::vector<double>>(), j.at("r").get<std::vector<double>>(),
                  j.at("bids").get<std::vector<double>>()};
    a.validate();
    return {std::move(a)};
  }
  throw std::invalid_argument("unknown game family tag '" + family + "'");
}

Json to_json(const LearnerReport& r, std::optional<std::uint64_t> seed) {
  Json params = Json::object();
  if (r.d) params["d"] = *r.d;
  if (r.family == Family::auction_bitwise) {
    params["c"] = static_cast<int>(r.recovered.max_block_size());
  }
  Json out{{"family", std::string(family_name(r.family))},
           {"n", r.n},
           {"params", std::move(params)},
           {"rounds", r.rounds},
           {"budget", r.budget},
           {"recovered", to_json(r.recovered)}};
  out["seed"] = seed ? Json(*seed) : Json(nullptr);
  return out;
}

Json transcript_entry_json(const TranscriptEntry& e) {
  return {{"round", e.round}, {"game", to_json(e.game)},
          {"observation", e.observation.to_bitstring()}};
}

void write_transcript_jsonl(std::ostream& out, const Transcript& t) {
  for (const auto& e : t.entries) out << transcript_entry_json(e).dump() << '\n';
}

}  // namespace csl
