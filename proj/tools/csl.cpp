// Command-line front end: run campaigns, print bound tables, trace single runs.

#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "csl/harness.hpp"
#include "csl/learners.hpp"
#include "csl/serialization.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& family,
                const std::string& n_text, const std::string& d_text,
                const std::string& truth_model, int reps, std::uint64_t seed,
                const std::string& policies, const std::string& out_path,
                const std::string& format, int threads) {
  csl::ExperimentConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config '" + config_path + "'");
    cfg = csl::config_from_json(csl::Json::parse(in));
  } else {
    cfg.family = csl::parse_family(family);
    cfg.n_values = csl::parse_int_list(n_text);
    cfg.d_values = csl::parse_int_list(d_text);
    cfg.truth_model = csl::TruthModel::parse(truth_model);
    cfg.repetitions = reps;
    cfg.seed = seed;
    cfg.policies = csl::parse_policy_list(policies);
    cfg.output_path = out_path;
    cfg.format = format;
    cfg.threads = threads;
  }
  cfg.validate();
  const auto result = csl::run_campaign(cfg);
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    csl::emit(std::cout, result, cfg.format);
  } else {
    csl::emit_file(cfg.output_path, result, cfg.format);
    std::cerr << result.rows.size() << " rows written to " << cfg.output_path << '\n';
  }
  return 0;
}

int bounds_command(const std::string& family_text, const std::string& n_text,
                   const std::string& d_text, const std::string& c_text) {
  std::vector<csl::Family> families;
  if (family_text.empty()) {
    families = {csl::Family::normal_form, csl::Family::congestion, csl::Family::graphical,
                csl::Family::auction_iterative, csl::Family::auction_bitwise};
  } else {
    families = {csl::parse_family(family_text)};
  }
  const auto ns = csl::parse_int_list(n_text);
  const auto ds = csl::parse_int_list(d_text);
  const auto cs = csl::parse_int_list(c_text);

  std::cout << std::left << std::setw(18) << "family" << std::right << std::setw(6) << "n"
            << std::setw(6) << "d" << std::setw(6) << "c" << std::setw(8) << "budget"
            << std::setw(8) << "lower" << '\n';
  for (auto f : families) {
    for (int n : ns) {
      std::vector<std::optional<int>> dd{std::nullopt}, cc{std::nullopt};
      if (f == csl::Family::graphical) {
        dd.clear();
        if (ds.empty()) {
          for (int d = 2; d <= n; d += 2) dd.emplace_back(d);
        } else {
          for (int d : ds) {
            if (d <= n) dd.emplace_back(d);
          }
        }
      }
      if (f == csl::Family::auction_bitwise) {
        cc.clear();
        if (cs.empty()) {
          cc.emplace_back(n);
        } else {
          for (int c : cs) {
            if (c <= n) cc.emplace_back(c);
          }
        }
      }
      for (auto d : dd) {
        for (auto c : cc) {
          const auto b = csl::bounds_report(f, n, d, c);
          std::cout << std::left << std::setw(18) << csl::family_name(f) << std::right
                    << std::setw(6) << n << std::setw(6) << (d ? std::to_string(*d) : "-")
                    << std::setw(6) << (c ? std::to_string(*c) : "-") << std::setw(8)
                    << b.upper_bound << std::setw(8) << b.info_lower_bound << '\n';
        }
      }
    }
  }
  return 0;
}

int trace_command(const std::string& family_text, const std::string& truth_text, int n,
                  std::optional<int> d, std::uint64_t seed, const std::string& policy_text) {
  const auto family = csl::parse_family(family_text);
  csl::CoalitionStructure truth;
  if (!truth_text.empty()) {
    truth = csl::coalition_from_json(csl::Json::parse(truth_text));
  } else {
    if (n < 1) throw std::invalid_argument("trace needs --truth or --n");
    csl::Rng rng(seed);
    truth = csl::random_partition(n, rng);
  }
  csl::HiddenOracle oracle(truth, csl::AdversaryPolicy::parse(policy_text));
  const auto report = csl::run_learner(family, oracle, d);
  csl::write_transcript_jsonl(std::cout, report.transcript);
  auto summary = csl::to_json(report, seed);
  summary["truth"] = csl::to_json(truth);
  const auto check = csl::verify_report(report, truth, family, d);
  summary["verified"] = check.ok;
  if (!check.ok) summary["failure"] = check.message;
  std::cout << summary.dump() << '\n';
  return check.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coalition structure learning simulator"};
  app.require_subcommand(1);

  std::string config_path, family = "normal_form", n_text = "2..16", d_text, truth_model = "uniform",
                           policies = "first", out_path, format = "csv";
  int reps = 1, threads = 1;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Run a campaign and emit one row per run");
  run->add_option("--config", config_path, "JSON config file (overrides other flags)");
  run->add_option("--family", family, "normal_form, congestion, graphical, auction_iterative, auction_bitwise");
  run->add_option("--n", n_text, "Population sizes, e.g. 2..64 or 8,16,32");
  run->add_option("--d", d_text, "Graphical degree limits (even); default every even d <= n");
  run->add_option("--truth-model", truth_model, "uniform, crp:<theta>, max:<c>, fixed:<json>");
  run->add_option("--reps", reps, "Truths per grid point");
  run->add_option("--seed", seed, "Campaign seed");
  run->add_option("--policies", policies, "Comma list of first, last, seed:<n>; or 'sweep'");
  run->add_option("--out", out_path, "Output file (stdout when omitted)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--threads", threads, "Worker threads");

  std::string b_family, b_n = "1..16", b_d, b_c;
  auto* bounds = app.add_subcommand("bounds", "Print round budgets and information lower bounds");
  bounds->add_option("--family", b_family, "Restrict to one family");
  bounds->add_option("--n", b_n, "Population sizes");
  bounds->add_option("--d", b_d, "Graphical degree limits");
  bounds->add_option("--c", b_c, "Largest coalition sizes for the bitwise auction budget");

  std::string t_family = "normal_form", t_truth, t_policy = "first";
  int t_n = 0;
  std::optional<int> t_d;
  std::uint64_t t_seed = 0;
  auto* trace = app.add_subcommand("trace", "Run one learner and dump its transcript as JSON lines");
  trace->add_option("--family", t_family, "Learner family");
  trace->add_option("--truth", t_truth, "Hidden partition as JSON, e.g. [[1,4],[2,3]]");
  trace->add_option("--n", t_n, "Population size for a random uniform truth");
  trace->add_option("--d", t_d, "Graphical degree limit");
  trace->add_option("--seed", t_seed, "Seed for the random truth");
  trace->add_option("--policy", t_policy, "first, last or seed:<n>");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return run_command(config_path, family, n_text, d_text, truth_model, reps, seed, policies,
                         out_path, format, threads);
    }
    if (*bounds) return bounds_command(b_family, b_n, b_d, b_c);
    if (*trace) return trace_command(t_family, t_truth, t_n, t_d, t_seed, t_policy);
  } catch (const csl::CampaignFailure& e) {
    std::cerr << "campaign aborted: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
