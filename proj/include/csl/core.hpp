#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace csl {

/// 1-based agent index. Bit patterns of the literal index matter to the
/// bitwise auction learner, so agents are never renumbered internally.
using AgentId = int;
using AgentSet = std::vector<AgentId>;
using BigInt = boost::multiprecision::cpp_int;

class CoalitionStructure {
 public:
  CoalitionStructure() = default;

  /// Validates that `blocks` partitions 1..n and stores the canonical form
  /// (members ascending, blocks ordered by their minimum element).
  CoalitionStructure(int n, std::vector<AgentSet> blocks);

  static CoalitionStructure singletons(int n);
  /// labels[i-1] names the block of agent i; any integer labels work.
  static CoalitionStructure from_labels(const std::vector<int>& labels);

  int n() const { return n_; }
  const std::vector<AgentSet>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t max_block_size() const;

  /// Position of agent i's block inside blocks().
  std::size_t block_index(AgentId i) const;
  const AgentSet& lookup_block(AgentId i) const;
  bool same_block(AgentId i, AgentId j) const;

  CoalitionStructure merge_blocks(AgentId i, AgentId j) const;

  friend bool operator==(const CoalitionStructure&,
                         const CoalitionStructure&) = default;

 private:
  void check_agent(AgentId i) const;
  void rebuild_index();

  int n_ = 0;
  std::vector<AgentSet> blocks_;
  std::vector<std::size_t> owner_;  // owner_[i-1] = index into blocks_
};

/// Applying the canonical constructor to an already canonical structure.
CoalitionStructure canonical(const CoalitionStructure& s);

std::string to_string(const CoalitionStructure& s);

// ---------------------------------------------------------------------------
// Counting and bounds.

/// Exact Bell number via the Bell triangle.
BigInt bell_number(int n);

/// ceil(log2(x)) for x >= 1.
int ceil_log2(const BigInt& x);
int ceil_log2(std::uint64_t x);
int floor_log2(std::uint64_t x);

/// Minimum rounds any learner needs: ceil(ceil(log2 B_n) / n).
int info_lower_bound(int n);

enum class Family {
  normal_form,
  congestion,
  graphical,
  auction_iterative,
  auction_bitwise,
};

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

/// Exact integer query budget for each learner.
///   normal_form / congestion: ceil(log2 n) + 1
///   graphical:                ceil(2n/d) + 2 ceil(log2 d) - 2   (d even, 2 <= d <= n)
///   auction_iterative:        n - 1
///   auction_bitwise:          (1 + floor(log2 n)) (1 + c) + 1   (1 <= c <= n)
int upper_bound(Family family, int n, std::optional<int> d = std::nullopt,
                std::optional<int> c = std::nullopt);

/// Lower bound for degree-d graphical learners, ceil((n-1)/d). Reported only.
int graphical_lower_bound(int n, int d);

struct BoundsReport {
  Family family;
  int n;
  std::optional<int> d;
  std::optional<int> c;
  int upper_bound;
  int info_lower_bound;
};

BoundsReport bounds_report(Family family, int n, std::optional<int> d = std::nullopt,
                           std::optional<int> c = std::nullopt);

}  // namespace csl
