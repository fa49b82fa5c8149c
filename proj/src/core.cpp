#include "csl/core.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <numeric>
#include <sstream>

namespace csl {

CoalitionStructure::CoalitionStructure(int n, std::vector<AgentSet> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  if (n < 0) throw std::invalid_argument("population size must be nonnegative");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (auto& b : blocks_) {
    if (b.empty()) throw std::invalid_argument("coalition blocks must be nonempty");
    std::sort(b.begin(), b.end());
    for (AgentId a : b) {
      if (a < 1 || a > n) {
        throw std::out_of_range("agent " + std::to_string(a) + " outside 1.." +
                                std::to_string(n));
      }
      if (seen[a - 1]) {
        throw std::invalid_argument("agent " + std::to_string(a) +
                                    " appears in more than one block");
      }
      seen[a - 1] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw std::invalid_argument("blocks do not cover every agent");
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const AgentSet& a, const AgentSet& b) { return a.front() < b.front(); });
  rebuild_index();
}

CoalitionStructure CoalitionStructure::singletons(int n) {
  std::vector<AgentSet> blocks;
  blocks.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (AgentId i = 1; i <= n; ++i) blocks.push_back({i});
  return CoalitionStructure(n, std::move(blocks));
}

CoalitionStructure CoalitionStructure::from_labels(const std::vector<int>& labels) {
  std::vector<std::pair<int, AgentSet>> groups;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == labels[k]; });
    if (it == groups.end()) {
      groups.push_back({labels[k], {}});
      it = std::prev(groups.end());
    }
    it->second.push_back(static_cast<AgentId>(k + 1));
  }
  std::vector<AgentSet> blocks;
  for (auto& g : groups) blocks.push_back(std::move(g.second));
  return CoalitionStructure(static_cast<int>(labels.size()), std::move(blocks));
}

void CoalitionStructure::rebuild_index() {
  owner_.assign(static_cast<std::size_t>(n_), 0);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (AgentId a : blocks_[b]) owner_[a - 1] = b;
  }
}

void CoalitionStructure::check_agent(AgentId i) const {
  if (i < 1 || i > n_) {
    throw std::out_of_range("agent " + std::to_string(i) + " outside 1.." +
                            std::to_string(n_));
  }
}

std::size_t CoalitionStructure::max_block_size() const {
  std::size_t c = 0;
  for (const auto& b : blocks_) c = std::max(c, b.size());
  return c;
}

std::size_t CoalitionStructure::block_index(AgentId i) const {
  check_agent(i);
  return owner_[i - 1];
}

const AgentSet& CoalitionStructure::lookup_block(AgentId i) const {
  return blocks_[block_index(i)];
}

bool CoalitionStructure::same_block(AgentId i, AgentId j) const {
  return block_index(i) == block_index(j);
}

CoalitionStructure CoalitionStructure::merge_blocks(AgentId i, AgentId j) const {
  const std::size_t bi = block_index(i);
  const std::size_t bj = block_index(j);
  if (bi == bj) return *this;
  std::vector<AgentSet> blocks;
  blocks.reserve(blocks_.size() - 1);
  AgentSet merged = blocks_[bi];
  merged.insert(merged.end(), blocks_[bj].begin(), blocks_[bj].end());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b != bi && b != bj) blocks.push_back(blocks_[b]);
  }
  blocks.push_back(std::move(merged));
  return CoalitionStructure(n_, std::move(blocks));
}

CoalitionStructure canonical(const CoalitionStructure& s) {
  return CoalitionStructure(s.n(), s.blocks());
}

std::string to_string(const CoalitionStructure& s) {
  std::ostringstream out;
  out << '[';
  for (std::size_t b = 0; b < s.blocks().size(); ++b) {
    if (b) out << ',';
    out << '[';
    const auto& blk = s.blocks()[b];
    for (std::size_t k = 0; k < blk.size(); ++k) {
      if (k) out << ',';
      out << blk[k];
    }
    out << ']';
  }
  out << ']';
  return out.str();
}

BigInt bell_number(int n) {
  if (n < 0) throw std::invalid_argument("bell_number requires n >= 0");
  // Bell triangle: each row starts with the last entry of the previous row.
  std::vector<BigInt> row{1};
  for (int r = 1; r <= n; ++r) {
    std::vector<BigInt> next;
    next.reserve(row.size() + 1);
    next.push_back(row.back());
    for (const auto& x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

int ceil_log2(const BigInt& x) {
  if (x < 1) throw std::invalid_argument("ceil_log2 requires x >= 1");
  if (x == 1) return 0;
  return static_cast<int>(boost::multiprecision::msb(BigInt(x - 1))) + 1;
}

int ceil_log2(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("ceil_log2 requires x >= 1");
  return x == 1 ? 0 : static_cast<int>(std::bit_width(x - 1));
}

int floor_log2(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("floor_log2 requires x >= 1");
  return static_cast<int>(std::bit_width(x)) - 1;
}

int info_lower_bound(int n) {
  if (n < 1) throw std::invalid_argument("info_lower_bound requires n >= 1");
  const int bits = ceil_log2(bell_number(n));
  return (bits + n - 1) / n;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::normal_form: return "normal_form";
    case Family::congestion: return "congestion";
    case Family::graphical: return "graphical";
    case Family::auction_iterative: return "auction_iterative";
    case Family::auction_bitwise: return "auction_bitwise";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::normal_form, Family::congestion, Family::graphical,
                   Family::auction_iterative, Family::auction_bitwise}) {
    if (family_name(f) == name) return f;
  }
  if (name == "normal-form") return Family::normal_form;
  if (name == "auction-iterative") return Family::auction_iterative;
  if (name == "auction-bitwise") return Family::auction_bitwise;
  throw std::invalid_argument("unknown game family '" + std::string(name) + "'");
}

namespace {

void check_graphical_degree(int n, int d) {
  if (d < 2 || d > n || d % 2 != 0) {
    throw std::invalid_argument("degree limit d=" + std::to_string(d) +
                                " must be even with 2 <= d <= n=" + std::to_string(n));
  }
}

}  // namespace

int upper_bound(Family family, int n, std::optional<int> d, std::optional<int> c) {
  if (n < 1) throw std::invalid_argument("upper_bound requires n >= 1");
  const auto un = static_cast<std::uint64_t>(n);
  switch (family) {
    case Family::normal_form:
    case Family::congestion:
      return ceil_log2(un) + 1;
    case Family::graphical: {
      if (!d) throw std::invalid_argument("graphical bound needs a degree limit d");
      check_graphical_degree(n, *d);
      const int blocks = (2 * n + *d - 1) / *d;
      return blocks + 2 * ceil_log2(static_cast<std::uint64_t>(*d)) - 2;
    }
    case Family::auction_iterative:
      return n - 1;
    case Family::auction_bitwise: {
      if (!c) throw std::invalid_argument("bitwise auction bound needs max coalition size c");
      if (*c < 1 || *c > n) {
        throw std::invalid_argument("max coalition size c must lie in 1..n");
      }
      return (1 + floor_log2(un)) * (1 + *c) + 1;
    }
  }
  throw std::invalid_argument("unknown family");
}

int graphical_lower_bound(int n, int d) {
  check_graphical_degree(n, d);
  return (n - 1 + d - 1) / d;
}

BoundsReport bounds_report(Family family, int n, std::optional<int> d,
                           std::optional<int> c) {
  return BoundsReport{family, n, d, c, upper_bound(family, n, d, c), info_lower_bound(n)};
}

}  // namespace csl
