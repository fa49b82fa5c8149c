#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "csl/core.hpp"
#include "csl/learners.hpp"
#include "csl/oracle.hpp"
#include "csl/serialization.hpp"

namespace csl {

/// Platform-independent draws on top of mt19937_64 (the standard
/// distributions are implementation-defined, which would break byte-identical
/// campaign output across toolchains).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  BigInt below(const BigInt& bound);
  /// Uniform in [0, 1) with 53 random bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

struct TruthModel {
  enum class Kind { uniform, fixed, chinese_restaurant, max_coalition };

  Kind kind = Kind::uniform;
  double theta = 1.0;                      // chinese_restaurant
  int max_size = 1;                        // max_coalition
  std::vector<CoalitionStructure> fixed;   // fixed; chosen by matching n

  static TruthModel uniform() { return {}; }
  static TruthModel chinese_restaurant(double theta);
  static TruthModel max_coalition(int c);
  static TruthModel fixed_list(std::vector<CoalitionStructure> truths);

  /// "uniform", "crp:<theta>", "max:<c>", or "fixed:<json list of partitions>".
  static TruthModel parse(const std::string& text);
  std::string name() const;
};

/// Exactly uniform over all B_n partitions: one big-integer draw in
/// [0, B_n) is unranked through counts of completions.
CoalitionStructure random_partition(int n, Rng& rng);
CoalitionStructure sample_truth(const TruthModel& model, int n, int repetition, Rng& rng);

struct ExperimentConfig {
  Family family = Family::normal_form;
  std::vector<int> n_values;
  std::vector<int> d_values;  // graphical only; empty means every even d <= n
  TruthModel truth_model;
  std::vector<AdversaryPolicy> policies{AdversaryPolicy::first()};
  int repetitions = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_path;
  std::string format = "csv";

  void validate() const;
};

ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& cfg);

struct CampaignRow {
  Family family;
  int n;
  std::optional<int> d;
  std::optional<int> c;
  std::string policy;
  std::uint64_t seed;
  int rounds;
  int budget;
  int lower_bound;
  bool recovered_ok;

  friend bool operator==(const CampaignRow&, const CampaignRow&) = default;
};

struct CampaignResult {
  std::vector<CampaignRow> rows;

  friend bool operator==(const CampaignResult&, const CampaignResult&) = default;
};

/// Raised when any run fails verification; what() carries the offending run
/// serialized as JSON.
class CampaignFailure : public std::runtime_error {
 public:
  CampaignFailure(const std::string& message, Json run)
      : std::runtime_error(message + "\n" + run.dump()), run_(std::move(run)) {}
  const Json& run() const { return run_; }

 private:
  Json run_;
};

CampaignResult run_campaign(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeader =
    "family,n,d,c,policy,seed,rounds,budget,lower_bound,recovered_ok";

void emit_csv(std::ostream& out, const CampaignResult& result);
void emit_json(std::ostream& out, const CampaignResult& result);
void emit(std::ostream& out, const CampaignResult& result, const std::string& format);
/// Writes to `path`; I/O failures surface as std::runtime_error with the
/// system message.
void emit_file(const std::string& path, const CampaignResult& result, const std::string& format);

Json to_json(const CampaignResult& result);
CampaignResult campaign_from_json(const Json& j);

/// "2..64", "4,8,16", or a mix such as "2..4,8".
std::vector<int> parse_int_list(const std::string& text);
/// Comma list of policy names, or "sweep" / "all" for first, last and 16 seeds.
std::vector<AdversaryPolicy> parse_policy_list(const std::string& text);

}  // namespace csl
