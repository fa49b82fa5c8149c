#include "csl/learners.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace csl {

namespace {

using PairList = std::vector<std::pair<AgentId, AgentId>>;  // (beneficiary, decider)

void notify(const SearchProbe& probe, std::string_view phase,
            const std::vector<AgentSet>& candidates, std::vector<int> alpha = {}) {
  if (probe) probe(SearchState{phase, candidates, std::move(alpha)});
}

bool any_at_least_two(const std::vector<AgentSet>& t) {
  return std::any_of(t.begin(), t.end(), [](const AgentSet& s) { return s.size() >= 2; });
}

CoalitionStructure merge_singletons(int n, const std::vector<AgentSet>& targets) {
  CoalitionStructure s = CoalitionStructure::singletons(n);
  for (AgentId j = 1; j <= n; ++j) {
    const auto& t = targets[j - 1];
    if (t.empty()) continue;
    if (t.size() != 1) throw std::logic_error("search ended with an unresolved candidate set");
    s = s.merge_blocks(t.front(), j);
  }
  return s;
}

LearnerReport finish(Family family, const HiddenOracle& oracle, CoalitionStructure recovered,
                     std::optional<int> d = std::nullopt) {
  LearnerReport rep;
  rep.family = family;
  rep.n = oracle.n();
  rep.d = d;
  const int c = static_cast<int>(std::max<std::size_t>(recovered.max_block_size(), 1));
  rep.recovered = std::move(recovered);
  rep.rounds = oracle.rounds_used();
  rep.budget = upper_bound(family, rep.n, d, c);
  rep.transcript = oracle.transcript();
  return rep;
}

// Shared by the normal-form and congestion learners: find each agent's
// smallest-index teammate, keeping the lower half L_j on a True bit.
template <typename MakeQuery>
CoalitionStructure smallest_teammate_search(HiddenOracle& oracle, MakeQuery make_query,
                                            const SearchProbe& probe) {
  const int n = oracle.n();
  std::vector<AgentSet> t(static_cast<std::size_t>(n));
  if (n >= 2) {
    PairList pairs;
    for (AgentId j = 2; j <= n; ++j) {
      for (AgentId i = 1; i < j; ++i) pairs.emplace_back(i, j);
    }
    const Observation o = oracle.observe(make_query(n, pairs));
    for (AgentId j = 1; j <= n; ++j) {
      if (!o[j]) continue;
      t[j - 1].resize(static_cast<std::size_t>(j - 1));
      std::iota(t[j - 1].begin(), t[j - 1].end(), 1);
    }
  }
  notify(probe, "initial", t);

  while (any_at_least_two(t)) {
    std::vector<AgentSet> lower(t.size()), upper(t.size());
    PairList pairs;
    for (AgentId j = 1; j <= n; ++j) {
      const auto& tj = t[j - 1];
      const auto half = static_cast<std::ptrdiff_t>(tj.size() / 2);
      lower[j - 1].assign(tj.begin(), tj.begin() + half);
      upper[j - 1].assign(tj.begin() + half, tj.end());
      for (AgentId i : lower[j - 1]) pairs.emplace_back(i, j);
    }
    const Observation o = oracle.observe(make_query(n, pairs));
    for (AgentId j = 1; j <= n; ++j) t[j - 1] = o[j] ? lower[j - 1] : upper[j - 1];
    notify(probe, "halving", t);
  }
  return merge_singletons(n, t);
}

FactoredNormalFormGame pd_query(int n, const PairList& pairs) {
  std::vector<PrisonerDilemmaFactor> factors;
  factors.reserve(pairs.size());
  for (auto [i, j] : pairs) factors.push_back({i, j});
  return FactoredNormalFormGame(n, std::move(factors));
}

CongestionGame braess_query(int n, const PairList& pairs) {
  std::vector<BraessFactor> factors;
  factors.reserve(pairs.size());
  for (auto [i, j] : pairs) factors.push_back({i, j});
  return braess_product(n, factors);
}

AgentSet complement(int n, const std::vector<char>& member) {
  AgentSet out;
  for (AgentId a = 1; a <= n; ++a) {
    if (!member[a - 1]) out.push_back(a);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

LearnerReport learn_normal_form(HiddenOracle& oracle, const SearchProbe& probe) {
  auto s = smallest_teammate_search(oracle, pd_query, probe);
  return finish(Family::normal_form, oracle, std::move(s));
}

LearnerReport learn_congestion(HiddenOracle& oracle, const SearchProbe& probe) {
  auto s = smallest_teammate_search(oracle, braess_query, probe);
  return finish(Family::congestion, oracle, std::move(s));
}

// ---------------------------------------------------------------------------

LearnerReport learn_graphical(HiddenOracle& oracle, int d, const SearchProbe& probe) {
  const int n = oracle.n();
  (void)upper_bound(Family::graphical, n, d);  // rejects invalid d

  const int size = d / 2;
  const int cnt = (n + size - 1) / size;
  auto belong = [size](AgentId j) { return (j - 1) / size; };

  // Which block holds each agent's predecessor: one query per block gap.
  std::vector<int> delta(static_cast<std::size_t>(n), -1);
  for (int gap = 0; gap < cnt; ++gap) {
    PairList pairs;
    for (AgentId j = 1; j <= n; ++j) {
      for (AgentId i = 1; i < j; ++i) {
        if (belong(j) - belong(i) == gap) pairs.emplace_back(i, j);
      }
    }
    const Observation o = oracle.observe(pd_query(n, pairs));
    for (AgentId j = 1; j <= n; ++j) {
      if (o[j] && delta[j - 1] == -1) delta[j - 1] = gap;
    }
  }

  std::vector<AgentSet> t(static_cast<std::size_t>(n));
  for (AgentId j = 1; j <= n; ++j) {
    if (delta[j - 1] < 0) continue;
    for (AgentId i = 1; i < j; ++i) {
      if (belong(j) - belong(i) == delta[j - 1]) t[j - 1].push_back(i);
    }
  }
  notify(probe, "blocks", t);

  // Predecessor search keeps the upper half R_j on a True bit. Same-block
  // predecessors first, then cross-block ones.
  auto search = [&](auto in_group, std::string_view phase) {
    auto pending = [&] {
      for (AgentId j = 1; j <= n; ++j) {
        if (in_group(j) && t[j - 1].size() >= 2) return true;
      }
      return false;
    };
    while (pending()) {
      std::vector<AgentSet> lower(t.size()), upper(t.size());
      PairList pairs;
      for (AgentId j = 1; j <= n; ++j) {
        if (!in_group(j)) continue;
        const auto& tj = t[j - 1];
        const auto half = static_cast<std::ptrdiff_t>(tj.size() / 2);
        lower[j - 1].assign(tj.begin(), tj.begin() + half);
        upper[j - 1].assign(tj.begin() + half, tj.end());
        for (AgentId i : upper[j - 1]) pairs.emplace_back(i, j);
      }
      const Observation o = oracle.observe(pd_query(n, pairs));
      for (AgentId j = 1; j <= n; ++j) {
        if (in_group(j)) t[j - 1] = o[j] ? upper[j - 1] : lower[j - 1];
      }
      notify(probe, phase, t);
    }
  };
  search([&](AgentId j) { return delta[j - 1] == 0; }, "same_block");
  search([&](AgentId j) { return delta[j - 1] >= 1; }, "cross_block");

  return finish(Family::graphical, oracle, merge_singletons(n, t), d);
}

// ---------------------------------------------------------------------------

LearnerReport learn_auction_iterative(HiddenOracle& oracle, const SearchProbe& probe) {
  const int n = oracle.n();
  AgentSet active(static_cast<std::size_t>(n));
  std::iota(active.begin(), active.end(), 1);
  CoalitionStructure s = CoalitionStructure::singletons(n);

  auto snapshot = [&] {
    std::vector<AgentSet> c(static_cast<std::size_t>(n));
    for (AgentId a : active) c[a - 1] = active;
    return c;
  };

  while (active.size() >= 2) {
    const AgentId head = active.front();
    while (active.size() >= 2 &&
           std::find(active.begin(), active.end(), head) != active.end()) {
      std::vector<char> in_active(static_cast<std::size_t>(n), 0);
      for (AgentId a : active) in_active[a - 1] = 1;
      AgentSet y;
      for (AgentId a : active) {
        if (a != head) y.push_back(a);
      }
      const Observation o = oracle.observe(auction_gadget(n, {head}, y, complement(n, in_active)));
      const AgentSet dev = o.deviators();
      if (!dev.empty()) {
        const AgentId mate = dev.front();
        s = s.merge_blocks(head, mate);
        active.erase(std::find(active.begin(), active.end(), mate));
      } else {
        active.erase(std::find(active.begin(), active.end(), head));
      }
      notify(probe, "peel", snapshot());
    }
  }
  return finish(Family::auction_iterative, oracle, std::move(s));
}

// ---------------------------------------------------------------------------

LearnerReport learn_auction_bitwise(HiddenOracle& oracle, const SearchProbe& probe) {
  const int n = oracle.n();
  const Observation first = oracle.observe(first_move_game(n));
  AgentSet leaders, followers;  // T_x and T_y
  for (AgentId a = 1; a <= n; ++a) (first[a] ? leaders : followers).push_back(a);

  std::vector<int> alpha(static_cast<std::size_t>(n), 0);
  const int top_bit = floor_log2(static_cast<std::uint64_t>(n));
  for (int b = 0; b <= top_bit; ++b) {
    AgentSet x;
    for (AgentId a : leaders) {
      if ((a >> b) & 1) x.push_back(a);
    }
    AgentSet unmatched = followers;  // T_False
    AgentSet newly;                  // T_True
    do {
      std::vector<char> used(static_cast<std::size_t>(n), 0);
      for (AgentId a : x) used[a - 1] = 1;
      for (AgentId a : unmatched) used[a - 1] = 1;
      const Observation o = oracle.observe(auction_gadget(n, x, unmatched, complement(n, used)));
      newly.clear();
      AgentSet rest;
      for (AgentId a : unmatched) (o[a] ? newly : rest).push_back(a);
      unmatched = std::move(rest);
    } while (!newly.empty());
    for (AgentId a : followers) {
      if (!std::binary_search(unmatched.begin(), unmatched.end(), a)) alpha[a - 1] += 1 << b;
    }
  }

  std::vector<AgentSet> candidates(static_cast<std::size_t>(n));
  for (AgentId a : followers) candidates[a - 1] = {alpha[a - 1]};
  notify(probe, "bits", candidates, alpha);

  CoalitionStructure s = CoalitionStructure::singletons(n);
  for (AgentId a : followers) {
    const int leader = alpha[a - 1];
    if (leader < 1 || leader > n) {
      throw std::logic_error("reconstructed leader index " + std::to_string(leader) +
                             " for agent " + std::to_string(a) + " is out of range");
    }
    s = s.merge_blocks(a, leader);
  }
  return finish(Family::auction_bitwise, oracle, std::move(s));
}

// ---------------------------------------------------------------------------

LearnerReport run_learner(Family family, HiddenOracle& oracle, std::optional<int> d,
                          const SearchProbe& probe) {
  switch (family) {
    case Family::normal_form: return learn_normal_form(oracle, probe);
    case Family::congestion: return learn_congestion(oracle, probe);
    case Family::graphical:
      if (!d) throw std::invalid_argument("graphical learner needs a degree limit d");
      return learn_graphical(oracle, *d, probe);
    case Family::auction_iterative: return learn_auction_iterative(oracle, probe);
    case Family::auction_bitwise: return learn_auction_bitwise(oracle, probe);
  }
  throw std::invalid_argument("unknown family");
}

namespace {

VerifyResult failure(std::string message, std::optional<int> round = std::nullopt) {
  return VerifyResult{false, std::move(message), round};
}

std::optional<std::string> query_violation(const GameStrategyPair& g, Family family, int n,
                                           std::optional<int> d) {
  if (g.n() != n) return "query population differs from n";
  switch (family) {
    case Family::normal_form:
    case Family::graphical: {
      const auto* f = std::get_if<FactoredNormalFormGame>(&g.game);
      if (!f) return "query is not a factored normal-form game";
      if (family == Family::graphical) {
        const int deg = graphical_view(*f).max_degree;
        if (deg > *d) {
          return "query degree " + std::to_string(deg) + " exceeds d=" + std::to_string(*d);
        }
      }
      return std::nullopt;
    }
    case Family::congestion: {
      const auto* c = std::get_if<CongestionGame>(&g.game);
      if (!c) return "query is not a congestion game";
      try {
        c->validate();
      } catch (const std::exception& e) {
        return std::string("invalid congestion game: ") + e.what();
      }
      if (!is_braess_product(*c)) return "congestion query is not a Braess product";
      return std::nullopt;
    }
    case Family::auction_iterative:
    case Family::auction_bitwise: {
      const auto* a = std::get_if<AuctionGame>(&g.game);
      if (!a) return "query is not an auction";
      try {
        a->validate();
      } catch (const std::exception& e) {
        return std::string("invalid auction: ") + e.what();
      }
      const auto shape = classify(*a);
      if (shape == AuctionShape::other) return "auction is not a gadget or first-move game";
      if (family == Family::auction_iterative && shape != AuctionShape::gadget) {
        return "iterative learner issued a non-gadget auction";
      }
      return std::nullopt;
    }
  }
  return "unknown family";
}

}  // namespace

VerifyResult verify_report(const LearnerReport& report, const CoalitionStructure& truth,
                           Family family, std::optional<int> d) {
  if (report.family != family) return failure("report family does not match");
  if (report.n != truth.n()) return failure("report population differs from truth");
  if (!(canonical(report.recovered) == canonical(truth))) {
    return failure("recovered " + to_string(report.recovered) + " differs from truth " +
                   to_string(truth));
  }
  int budget = 0;
  try {
    budget = upper_bound(family, truth.n(), d,
                         static_cast<int>(std::max<std::size_t>(truth.max_block_size(), 1)));
  } catch (const std::exception& e) {
    return failure(std::string("invalid bound parameters: ") + e.what());
  }
  if (report.rounds > budget) {
    return failure("used " + std::to_string(report.rounds) + " rounds, budget is " +
                   std::to_string(budget));
  }
  if (report.budget != budget) {
    return failure("report budget " + std::to_string(report.budget) + " disagrees with " +
                   std::to_string(budget));
  }
  if (static_cast<std::size_t>(report.rounds) != report.transcript.size()) {
    return failure("round count disagrees with transcript length");
  }
  for (const auto& entry : report.transcript.entries) {
    if (auto why = query_violation(entry.game, family, truth.n(), d)) {
      return failure(*why, entry.round);
    }
  }
  return {};
}

}  // namespace csl
