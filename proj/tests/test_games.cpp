#include <doctest.h>

#include <random>
#include <set>

#include "csl/games.hpp"
#include "csl/oracle.hpp"

using namespace csl;

namespace {

std::vector<std::pair<int, int>> pairs_of(const FactoredNormalFormGame& g) {
  std::vector<std::pair<int, int>> out;
  for (const auto& f : g.factors()) out.emplace_back(f.beneficiary, f.decider);
  return out;
}

int degree_by_hand(const FactoredNormalFormGame& g) {
  std::vector<int> count(g.n() + 1, 0);
  for (const auto& f : g.factors()) {
    ++count[f.beneficiary];
    ++count[f.decider];
  }
  return g.n() == 0 ? 0 : *std::max_element(count.begin(), count.end());
}

}  // namespace

TEST_CASE("prisoner's dilemma constructor") {
  using P = std::vector<std::pair<int, int>>;
  CHECK(pairs_of(prisoner_dilemma(4, 1, 3)) == P{{1, 3}});
  CHECK(pairs_of(prisoner_dilemma(4, 3, 1)) == P{{3, 1}});
  CHECK_FALSE(prisoner_dilemma(4, 3, 1) == prisoner_dilemma(4, 1, 3));
  CHECK_THROWS_AS(prisoner_dilemma(4, 2, 2), std::invalid_argument);
  CHECK_THROWS(prisoner_dilemma(4, 1, 5));
}

TEST_CASE("prisoner's dilemma payoffs") {
  auto g = prisoner_dilemma(3, 1, 3);
  PdAction coop[] = {PdAction::cooperate};
  PdAction defect[] = {PdAction::defect};
  CHECK(factored_utility(g, 1, coop) == 2.0);
  CHECK(factored_utility(g, 3, coop) == -1.0);
  CHECK(factored_utility(g, 2, coop) == 0.0);
  CHECK(factored_utility(g, 1, defect) == 0.0);
  CHECK(factored_utility(g, 3, defect) == 0.0);
}

TEST_CASE("product of factored games") {
  using P = std::vector<std::pair<int, int>>;
  CHECK(pairs_of(product({prisoner_dilemma(4, 1, 3), prisoner_dilemma(4, 1, 4)})) == P{{1, 3}, {1, 4}});
  auto empty = product(4, std::span<const FactoredNormalFormGame>{});
  CHECK(empty.n() == 4);
  CHECK(empty.factors().empty());
  CHECK_THROWS(product(std::span<const FactoredNormalFormGame>{}));
  CHECK_THROWS_AS(product({prisoner_dilemma(4, 1, 2), prisoner_dilemma(4, 1, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(product({prisoner_dilemma(4, 1, 2), prisoner_dilemma(5, 1, 3)}), std::invalid_argument);
}

TEST_CASE("all_pairs_game") {
  CHECK(all_pairs_game(4).factors().size() == 6);
  CHECK(all_pairs_game(1).factors().empty());
  using P = std::vector<std::pair<int, int>>;
  CHECK(pairs_of(all_pairs_game(3)) == P{{1, 2}, {1, 3}, {2, 3}});
  for (int n = 1; n <= 12; ++n) {
    auto g = all_pairs_game(n);
    CHECK(g.factors().size() == static_cast<std::size_t>(n * (n - 1) / 2));
    std::set<std::pair<int, int>> seen;
    for (const auto& f : g.factors()) {
      CHECK(f.beneficiary < f.decider);
      CHECK(seen.emplace(f.beneficiary, f.decider).second);
    }
  }
}

TEST_CASE("graphical view") {
  CHECK(graphical_view(all_pairs_game(4)).max_degree == 3);
  auto g = product({prisoner_dilemma(4, 1, 3), prisoner_dilemma(4, 1, 4)});
  auto v = graphical_view(g);
  CHECK(v.max_degree == 2);
  CHECK(v.edges == std::vector<std::pair<int, int>>{{1, 3}, {1, 4}});
  CHECK(graphical_view(FactoredNormalFormGame(4, {})).max_degree == 0);
  // Both directions of a pair share one undirected edge but count twice.
  auto both = product({prisoner_dilemma(3, 1, 2), prisoner_dilemma(3, 2, 1)});
  CHECK(graphical_view(both).edges.size() == 1);
  CHECK(graphical_view(both).max_degree == 2);
}

TEST_CASE("product degree is subadditive") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 8;
    std::set<std::pair<int, int>> used;
    std::vector<FactoredNormalFormGame> ops;
    int k = 1 + static_cast<int>(rng() % 4);
    for (int o = 0; o < k; ++o) {
      std::vector<PrisonerDilemmaFactor> fs;
      int m = static_cast<int>(rng() % 4);
      for (int x = 0; x < m; ++x) {
        int i = 1 + static_cast<int>(rng() % n), j = 1 + static_cast<int>(rng() % n);
        if (i == j || !used.emplace(i, j).second) continue;
        fs.push_back({i, j});
      }
      ops.emplace_back(n, fs);
    }
    auto p = product(ops);
    int sum = 0;
    for (const auto& g : ops) sum += graphical_view(g).max_degree;
    CHECK(graphical_view(p).max_degree <= sum);
    CHECK(graphical_view(p).max_degree == degree_by_hand(p));
  }
  // Sharing a hub agent makes the bound tight.
  auto a = product({prisoner_dilemma(5, 1, 2), prisoner_dilemma(5, 1, 3)});
  auto b = product({prisoner_dilemma(5, 4, 1), prisoner_dilemma(5, 1, 5)});
  CHECK(graphical_view(product({a, b})).max_degree ==
        graphical_view(a).max_degree + graphical_view(b).max_degree);
}

TEST_CASE("braess gadget costs") {
  auto g = braess(2, 1, 2);
  CHECK(g.is_valid());
  CHECK(g.resource_count() == 3);
  auto spec = specified_profile(g);
  CHECK(resources_of(g, 1, spec[0]) == ResourceSet{0});
  CHECK(resources_of(g, 2, spec[1]) == ResourceSet{0, 2});
  CHECK(resource_loads(g, spec) == std::vector<int>{2, 0, 1});
  // Shared coalition pays 4 at the specified profile.
  CHECK(-(congestion_utility(g, spec, 1) + congestion_utility(g, spec, 2)) == doctest::Approx(4.0));
  // Decider switching to r2 drops the joint cost to 3.5.
  auto dev = spec;
  dev[1][0] = 0;
  CHECK(resources_of(g, 2, dev[1]) == ResourceSet{1});
  CHECK(-(congestion_utility(g, dev, 1) + congestion_utility(g, dev, 2)) == doctest::Approx(3.5));
  // Alone, the decider prefers its specified route: 2 < 2.5.
  CHECK(-congestion_utility(g, spec, 2) == doctest::Approx(2.0));
  CHECK(-congestion_utility(g, dev, 2) == doctest::Approx(2.5));
}

TEST_CASE("braess bystanders hold the empty strategy") {
  auto g = braess(4, 1, 3);
  CHECK(g.is_valid());
  for (int a : {2, 4}) {
    const auto& comps = g.components(a);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].options == std::vector<ResourceSet>{{}});
  }
  CHECK_THROWS_AS(braess(4, 2, 2), std::invalid_argument);
}

TEST_CASE("braess products are valid congestion games") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7);
    std::set<std::pair<int, int>> used;
    std::vector<BraessFactor> fs;
    for (int x = 0; x < 10; ++x) {
      int i = 1 + static_cast<int>(rng() % n), j = 1 + static_cast<int>(rng() % n);
      if (i == j || !used.emplace(i, j).second) continue;
      fs.push_back({i, j});
    }
    auto g = braess_product(n, fs);
    CHECK_NOTHROW(g.validate());
    CHECK(g.resource_count() == 3 * fs.size());
    CHECK(is_braess_product(g));

    std::vector<CongestionGame> singles;
    for (const auto& f : fs) singles.push_back(braess(n, f.beneficiary, f.decider));
    if (!singles.empty()) CHECK(congestion_product(singles) == g);
  }
  BraessFactor dup[] = {{1, 2}, {1, 2}};
  CHECK_THROWS_AS(braess_product(3, dup), std::invalid_argument);
}

TEST_CASE("congestion validation rejects bad spaces") {
  std::vector<ResourceCost> costs{{0, 1}};
  CHECK_THROWS(CongestionGame(1, costs, {{StrategyComponent{{}, 0}}}).validate());
  CHECK_THROWS(CongestionGame(1, costs, {{StrategyComponent{{{0}}, 1}}}).validate());
  CHECK_THROWS(CongestionGame(1, costs, {{StrategyComponent{{{3}}, 0}}}).validate());
  CHECK_NOTHROW(CongestionGame(1, costs, {{StrategyComponent{{{0}}, 0}}}).validate());
}

TEST_CASE("auction gadget") {
  auto g = auction_gadget(4, {1}, {2, 3, 4}, {});
  CHECK(g.valuations == std::vector<double>{1, 0, 0, 0});
  CHECK(g.reserves == std::vector<double>{1, 0, 0, 0});
  CHECK(g.bids == std::vector<double>{0, 0, 0, 0});
  CHECK(classify(g) == AuctionShape::gadget);

  auto z = auction_gadget(3, {}, {1, 2, 3}, {});
  CHECK(z.valuations == std::vector<double>{0, 0, 0});

  CHECK_THROWS_AS(auction_gadget(3, {1, 3}, {2}, {3}), std::invalid_argument);
  CHECK_THROWS_AS(auction_gadget(3, {1}, {2}, {}), std::invalid_argument);

  auto parts = gadget_parts(auction_gadget(5, {2}, {1, 4}, {3, 5}));
  CHECK(parts.x == AgentSet{2});
  CHECK(parts.y == AgentSet{1, 4});
  CHECK(parts.z == AgentSet{3, 5});
}

TEST_CASE("first-move game") {
  auto g = first_move_game(6);
  CHECK(g.valuations == std::vector<double>(6, 1.0));
  CHECK(g.reserves == std::vector<double>(6, 0.0));
  CHECK(g.bids == std::vector<double>(6, 0.0));
  CHECK(classify(g) == AuctionShape::first_move);
  CHECK(first_move_game(1).n == 1);
  CHECK_THROWS(first_move_game(0));

  AuctionGame odd{2, {0.5, 0}, {0, 0}, {0, 0}};
  CHECK(classify(odd) == AuctionShape::other);
}
