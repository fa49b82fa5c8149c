#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csl/core.hpp"
#include "csl/oracle.hpp"

namespace csl {

struct LearnerReport {
  Family family = Family::normal_form;
  int n = 0;
  std::optional<int> d;  // graphical degree limit
  CoalitionStructure recovered;
  int rounds = 0;
  int budget = 0;
  Transcript transcript;
};

/// Snapshot of a learner's search sets, handed to an optional probe at every
/// loop boundary so tests can check loop invariants against the known truth.
struct SearchState {
  std::string_view phase;
  /// candidates[j-1] is the current search set T_j of agent j.
  std::vector<AgentSet> candidates;
  /// Bitwise auction learner only: reconstructed teammate index per agent in
  /// T_y, 0 elsewhere.
  std::vector<int> alpha;
};

using SearchProbe = std::function<void(const SearchState&)>;

/// Simultaneous binary search over products of directed prisoner's dilemmas.
LearnerReport learn_normal_form(HiddenOracle& oracle, const SearchProbe& probe = {});
/// Same search, every query a product of directed Braess's paradoxes.
LearnerReport learn_congestion(HiddenOracle& oracle, const SearchProbe& probe = {});
/// Block decomposition plus two predecessor searches; every query has degree <= d.
LearnerReport learn_graphical(HiddenOracle& oracle, int d, const SearchProbe& probe = {});
/// One auction gadget per round, peeling one agent off the active set each time.
LearnerReport learn_auction_iterative(HiddenOracle& oracle, const SearchProbe& probe = {});
/// First-move query, then bit-by-bit identification of each follower's leader.
LearnerReport learn_auction_bitwise(HiddenOracle& oracle, const SearchProbe& probe = {});

LearnerReport run_learner(Family family, HiddenOracle& oracle, std::optional<int> d = std::nullopt,
                          const SearchProbe& probe = {});

struct VerifyResult {
  bool ok = true;
  std::string message;
  std::optional<int> round;  // 1-based round of the offending query, if any

  explicit operator bool() const { return ok; }
};

/// Checks exact recovery, the round budget, and family-specific shape
/// constraints on every recorded query.
VerifyResult verify_report(const LearnerReport& report, const CoalitionStructure& truth,
                           Family family, std::optional<int> d = std::nullopt);

}  // namespace csl
