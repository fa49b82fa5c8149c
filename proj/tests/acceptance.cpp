// Acceptance suite: one PASS/FAIL line per criterion. Bounds are recomputed
// here from their closed forms rather than taken from the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "csl/harness.hpp"
#include "csl/learners.hpp"
#include "support.hpp"

using namespace csl;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  int failures = 0;

  void fail(const std::string& what) {
    if (failures++ < 5) std::cerr << "    " << what << '\n';
    ok = false;
  }
};

int clog2(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}
int flog2(int n) {
  int k = 0;
  while ((2 << k) <= n) ++k;
  return k;
}

int degree_of(const FactoredNormalFormGame& g) {
  std::vector<int> count(static_cast<std::size_t>(g.n()) + 1, 0);
  int best = 0;
  for (const auto& f : g.factors()) {
    best = std::max(best, ++count[f.beneficiary]);
    best = std::max(best, ++count[f.decider]);
  }
  return best;
}

std::string describe(Family f, int n, const CoalitionStructure& truth, const AdversaryPolicy& p) {
  std::ostringstream s;
  s << family_name(f) << " n=" << n << " truth=" << to_string(truth) << " policy=" << p.name();
  return s.str();
}

// 1 and 2 share the same protocol.
Outcome binary_search_budget(Family family) {
  Outcome out;
  int runs = 0, worst_slack = 1 << 30;
  for (int n = 2; n <= 64; ++n) {
    Rng rng(derive_seed(1001, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(family)));
    const int bound = clog2(n) + 1;
    for (int rep = 0; rep < 50; ++rep) {
      auto truth = random_partition(n, rng);
      HiddenOracle oracle(truth, AdversaryPolicy::seeded(static_cast<std::uint64_t>(rep)));
      auto rep_ = run_learner(family, oracle);
      ++runs;
      if (!(rep_.recovered == truth)) out.fail("wrong recovery: " + describe(family, n, truth, oracle.policy()));
      if (rep_.rounds > bound) out.fail("over budget: " + describe(family, n, truth, oracle.policy()));
      worst_slack = std::min(worst_slack, bound - rep_.rounds);
      if (family == Family::congestion) {
        for (const auto& e : rep_.transcript.entries) {
          const auto* g = std::get_if<CongestionGame>(&e.game.game);
          if (g == nullptr || !g->is_valid()) {
            out.fail("invalid congestion query: " + describe(family, n, truth, oracle.policy()));
          }
        }
      }
    }
  }
  out.detail = std::to_string(runs) + " runs, min slack " + std::to_string(worst_slack);
  return out;
}

Outcome graphical_budget() {
  Outcome out;
  int runs = 0;
  std::ostringstream summary;
  for (int n : {8, 16, 32, 64}) {
    for (int d = 2; d <= n; d += 2) {
      Rng rng(derive_seed(3003, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d)));
      const int bound = (2 * n + d - 1) / d + 2 * clog2(d) - 2;
      const int lower = (n - 1 + d - 1) / d;
      int max_rounds = 0;
      for (int rep = 0; rep < 20; ++rep) {
        auto truth = random_partition(n, rng);
        HiddenOracle oracle(truth, AdversaryPolicy::seeded(static_cast<std::uint64_t>(rep)));
        auto r = learn_graphical(oracle, d);
        ++runs;
        max_rounds = std::max(max_rounds, r.rounds);
        if (!(r.recovered == truth)) out.fail("wrong recovery: " + describe(Family::graphical, n, truth, oracle.policy()));
        if (r.rounds > bound) out.fail("over budget d=" + std::to_string(d) + ": " + describe(Family::graphical, n, truth, oracle.policy()));
        for (const auto& e : r.transcript.entries) {
          const auto* g = std::get_if<FactoredNormalFormGame>(&e.game.game);
          if (g == nullptr || degree_of(*g) > d) {
            out.fail("degree above d=" + std::to_string(d) + " in round " + std::to_string(e.round));
          }
        }
      }
      if (n == 64 && (d & (d - 1)) == 0) {
        summary << " d=" << d << ":" << max_rounds << "/" << bound << "(lb " << lower << ")";
      }
    }
  }
  out.detail = std::to_string(runs) + " runs; n=64 max rounds/budget:" + summary.str();
  return out;
}

Outcome auction_iterative_budget() {
  Outcome out;
  int runs = 0;
  const auto policies = AdversaryPolicy::sweep(16);
  for (int n = 2; n <= 32; ++n) {
    Rng rng(derive_seed(4004, static_cast<std::uint64_t>(n)));
    for (int rep = 0; rep < 20; ++rep) {
      auto truth = random_partition(n, rng);
      for (const auto& p : policies) {
        HiddenOracle oracle(truth, p);
        auto r = learn_auction_iterative(oracle);
        ++runs;
        if (!(r.recovered == truth)) out.fail("wrong recovery: " + describe(Family::auction_iterative, n, truth, p));
        if (r.rounds > n - 1) out.fail("over budget: " + describe(Family::auction_iterative, n, truth, p));
      }
    }
  }
  out.detail = std::to_string(runs) + " runs over " + std::to_string(policies.size()) + " policies";
  return out;
}

Outcome auction_bitwise_budget() {
  Outcome out;
  int runs = 0;
  const auto policies = AdversaryPolicy::sweep(16);
  for (int n = 2; n <= 64; ++n) {
    for (int c : {1, 2, 4, 8}) {
      Rng rng(derive_seed(5005, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(c)));
      auto model = TruthModel::max_coalition(c);
      for (int rep = 0; rep < 5; ++rep) {
        auto truth = sample_truth(model, n, rep, rng);
        const int actual_c = static_cast<int>(truth.max_block_size());
        if (actual_c > c) out.fail("truth model exceeded c");
        const int bound = (1 + flog2(n)) * (1 + actual_c) + 1;
        std::optional<CoalitionStructure> common;
        for (const auto& p : policies) {
          HiddenOracle oracle(truth, p);
          auto r = learn_auction_bitwise(oracle);
          ++runs;
          if (!(r.recovered == truth)) out.fail("wrong recovery: " + describe(Family::auction_bitwise, n, truth, p));
          if (r.rounds > bound) out.fail("over budget: " + describe(Family::auction_bitwise, n, truth, p));
          if (!common) common = r.recovered;
          else if (!(*common == r.recovered)) out.fail("policy-dependent answer: " + describe(Family::auction_bitwise, n, truth, p));
        }
      }
    }
  }
  out.detail = std::to_string(runs) + " runs over " + std::to_string(policies.size()) + " policies";
  return out;
}

// Fast and reference oracles must agree block by block: same verdict on the
// specified profile and the same set of admissible deviator sets, hence the
// same observation under every policy.
void compare(Outcome& out, const CoalitionStructure& truth, const GameStrategyPair& g,
             const std::vector<BlockOutcome>& fast, const std::vector<AdversaryPolicy>& policies,
             long long& checks) {
  auto slow = brute_force_outcomes(truth, g);
  ++checks;
  if (slow != fast) {
    out.fail("outcome mismatch for truth " + to_string(truth) + " game " + to_json(g).dump());
    return;
  }
  for (const auto& p : policies) {
    if (brute_force_observe(truth, g, p) != evaluate_query(truth, g, p)) {
      out.fail("observation mismatch under " + p.name() + " for " + to_json(g).dump());
    }
  }
}

Outcome oracle_equivalence() {
  Outcome out;
  long long checks = 0;
  const std::vector<AdversaryPolicy> policies{AdversaryPolicy::first(), AdversaryPolicy::last(),
                                              AdversaryPolicy::seeded(1), AdversaryPolicy::seeded(2)};
  // (a) single and double PD factors, n <= 5.
  for (int n = 2; n <= 5; ++n) {
    std::vector<PrisonerDilemmaFactor> all;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j) all.push_back({i, j});
    std::vector<FactoredNormalFormGame> games;
    for (std::size_t a = 0; a < all.size(); ++a) {
      games.emplace_back(n, std::vector{all[a]});
      for (std::size_t b = a + 1; b < all.size(); ++b) games.emplace_back(n, std::vector{all[a], all[b]});
    }
    csl_test::for_each_partition(n, [&](const CoalitionStructure& truth) {
      for (const auto& g : games) compare(out, truth, {g}, factored_outcomes(truth, g), policies, checks);
    });
  }
  // (b) single Braess factors, n <= 4.
  for (int n = 2; n <= 4; ++n) {
    csl_test::for_each_partition(n, [&](const CoalitionStructure& truth) {
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          if (i != j) {
            auto g = braess(n, i, j);
            compare(out, truth, {g}, braess_outcomes(truth, g), policies, checks);
          }
    });
  }
  // (c) every auction gadget A(X, Y, Z) and the first-move game, n <= 4.
  for (int n = 1; n <= 4; ++n) {
    int total = 1;
    for (int k = 0; k < n; ++k) total *= 3;
    csl_test::for_each_partition(n, [&](const CoalitionStructure& truth) {
      for (int code = 0; code < total; ++code) {
        AgentSet x, y, z;
        int c = code;
        for (int a = 1; a <= n; ++a, c /= 3) (c % 3 == 0 ? x : c % 3 == 1 ? y : z).push_back(a);
        auto g = auction_gadget(n, x, y, z);
        compare(out, truth, {g}, auction_outcomes(truth, g), policies, checks);
      }
      auto fm = first_move_game(n);
      compare(out, truth, {fm}, auction_outcomes(truth, fm), policies, checks);
    });
  }
  out.detail = std::to_string(checks) + " (truth, game) pairs";
  return out;
}

Outcome indistinguishability() {
  Outcome out;
  const int n = 8;
  std::mt19937_64 rng(7007);
  const auto policies = AdversaryPolicy::sweep(4);
  for (int trial = 0; trial < 1000; ++trial) {
    int i = 1 + static_cast<int>(rng() % n);
    int j = 1 + static_cast<int>(rng() % (n - 1));
    if (j >= i) ++j;
    std::set<std::pair<int, int>> used;
    std::vector<PrisonerDilemmaFactor> fs;
    const int want = static_cast<int>(rng() % 40);
    while (static_cast<int>(fs.size()) < want) {
      int a = 1 + static_cast<int>(rng() % n), b = 1 + static_cast<int>(rng() % n);
      if (a == b || (a == i && b == j) || (a == j && b == i)) continue;
      if (used.emplace(a, b).second) fs.push_back({a, b});
    }
    FactoredNormalFormGame g(n, fs);
    auto s0 = CoalitionStructure::singletons(n);
    auto s1 = s0.merge_blocks(i, j);
    for (const auto& p : policies) {
      if (evaluate_query(s0, {g}, p) != evaluate_query(s1, {g}, p) ||
          brute_force_observe(s0, {g}, p) != brute_force_observe(s1, {g}, p)) {
        out.fail("distinguishable pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  out.detail = "1000 games, n=8";
  return out;
}

Outcome information_bound() {
  Outcome out;
  for (int n = 1; n <= 128; ++n) {
    if (info_lower_bound(n) != csl_test::lower_bound_reference(n)) out.fail("lower bound mismatch at n=" + std::to_string(n));
  }
  for (int n = 0; n <= 12; ++n) {
    if (bell_number(n) != csl_test::count_partitions(n)) out.fail("Bell mismatch at n=" + std::to_string(n));
  }
  long long rows = 0, below_rounds = 0;
  for (auto f : {Family::normal_form, Family::congestion, Family::graphical, Family::auction_iterative,
                 Family::auction_bitwise}) {
    ExperimentConfig cfg;
    cfg.family = f;
    cfg.n_values = f == Family::graphical ? std::vector<int>{8, 16, 32} : parse_int_list("1..32");
    cfg.repetitions = 2;
    cfg.seed = 8008;
    for (const auto& row : run_campaign(cfg).rows) {
      ++rows;
      if (row.lower_bound != csl_test::lower_bound_reference(row.n)) out.fail("row lower bound mismatch");
      if (row.lower_bound > row.budget) out.fail("lower bound above budget at n=" + std::to_string(row.n));
      if (row.lower_bound <= row.rounds) ++below_rounds;
    }
  }
  out.detail = std::to_string(rows) + " rows; lower_bound <= rounds in " + std::to_string(below_rounds) + "/" +
               std::to_string(rows) + " (reported only)";
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome determinism(const char* cli) {
  Outcome out;
  ExperimentConfig cfg;
  cfg.family = Family::auction_bitwise;
  cfg.n_values = parse_int_list("2..24");
  cfg.truth_model = TruthModel::chinese_restaurant(1.0);
  cfg.policies = AdversaryPolicy::sweep(3);
  cfg.repetitions = 3;
  cfg.seed = 9009;
  std::ostringstream a, b;
  emit_csv(a, run_campaign(cfg));
  cfg.threads = 4;
  emit_csv(b, run_campaign(cfg));
  if (a.str() != b.str()) out.fail("in-process CSV differs between executions");
  out.detail = "in-process";

  if (cli != nullptr && std::filesystem::exists(cli)) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto f1 = dir / "csl_det_1.csv", f2 = dir / "csl_det_2.csv";
    const std::string args = " run --family graphical --n 8,16 --reps 3 --seed 42 --policies sweep --threads 3 --out ";
    const int r1 = std::system((std::string(cli) + args + f1.string() + " 2>/dev/null").c_str());
    const int r2 = std::system((std::string(cli) + args + f2.string() + " 2>/dev/null").c_str());
    if (r1 != 0 || r2 != 0) out.fail("CLI run failed");
    else if (slurp(f1) != slurp(f2) || slurp(f1).empty()) out.fail("CLI CSV differs between executions");
    std::filesystem::remove(f1);
    std::filesystem::remove(f2);
    out.detail += " and CLI";
  }
  out.detail += " output byte-identical";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "normal-form budget", 10, [] { return binary_search_budget(Family::normal_form); }},
      {2, "congestion parity", 30, [] { return binary_search_budget(Family::congestion); }},
      {3, "graphical budget and degree law", 60, graphical_budget},
      {4, "auction iterative budget", 30, auction_iterative_budget},
      {5, "auction bitwise budget", 60, auction_bitwise_budget},
      {6, "fast/reference oracle equivalence", 120, oracle_equivalence},
      {7, "graphical indistinguishability", 10, indistinguishability},
      {8, "information lower bound", 5, information_bound},
      {9, "campaign determinism", 10, [cli] { return determinism(cli); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) {
      o.ok = false;
      o.detail += "; exceeded time limit";
    }
    std::printf("[%s] %d. %s: %s (%.2fs, limit %.0fs)\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.limit_s);
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
