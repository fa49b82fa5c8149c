#include "csl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace csl {

// ---------------------------------------------------------------------------
// Random streams.

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below needs a positive bound");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

BigInt Rng::below(const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::below needs a positive bound");
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
  const unsigned words = (bits + 63) / 64;
  const BigInt mask = (BigInt(1) << bits) - 1;
  for (;;) {
    BigInt x = 0;
    for (unsigned w = 0; w < words; ++w) x = (x << 64) | BigInt(next());
    x &= mask;
    if (x < bound) return x;
  }
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return mix(mix(mix(mix(seed) ^ a) ^ b) ^ c);
}

// ---------------------------------------------------------------------------
// Truth models.

TruthModel TruthModel::chinese_restaurant(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("CRP concentration must be positive");
  TruthModel m;
  m.kind = Kind::chinese_restaurant;
  m.theta = theta;
  return m;
}

TruthModel TruthModel::max_coalition(int c) {
  if (c < 1) throw std::invalid_argument("max coalition size must be at least 1");
  TruthModel m;
  m.kind = Kind::max_coalition;
  m.max_size = c;
  return m;
}

TruthModel TruthModel::fixed_list(std::vector<CoalitionStructure> truths) {
  if (truths.empty()) throw std::invalid_argument("fixed truth model needs at least one partition");
  TruthModel m;
  m.kind = Kind::fixed;
  m.fixed = std::move(truths);
  return m;
}

TruthModel TruthModel::parse(const std::string& text) {
  if (text == "uniform") return uniform();
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "crp" || head == "chinese-restaurant") return chinese_restaurant(std::stod(arg));
  if (head == "max" || head == "max-coalition") return max_coalition(std::stoi(arg));
  if (head == "fixed") {
    const Json j = Json::parse(arg);
    std::vector<CoalitionStructure> truths;
    // Accept a single partition or a list of partitions.
    if (!j.empty() && j.at(0).is_array() && !j.at(0).empty() && j.at(0).at(0).is_array()) {
      for (const auto& p : j) truths.push_back(coalition_from_json(p));
    } else {
      truths.push_back(coalition_from_json(j));
    }
    return fixed_list(std::move(truths));
  }
  throw std::invalid_argument("unknown truth model '" + text + "'");
}

std::string TruthModel::name() const {
  switch (kind) {
    case Kind::uniform: return "uniform";
    case Kind::chinese_restaurant: {
      std::ostringstream s;
      s << "crp:" << theta;
      return s.str();
    }
    case Kind::max_coalition: return "max:" + std::to_string(max_size);
    case Kind::fixed: {
      Json list = Json::array();
      for (const auto& t : fixed) list.push_back(to_json(t));
      return "fixed:" + list.dump();
    }
  }
  return "?";
}

CoalitionStructure random_partition(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_partition requires n >= 1");
  // completions[r][m]: ways to place r more elements given m open blocks.
  const auto size = static_cast<std::size_t>(n);
  std::vector<std::vector<BigInt>> completions(size + 1, std::vector<BigInt>(size + 2));
  for (std::size_t m = 0; m <= size + 1; ++m) completions[0][m] = 1;
  for (std::size_t r = 1; r <= size; ++r) {
    for (std::size_t m = 0; m + r <= size + 1 && m <= size; ++m) {
      completions[r][m] = BigInt(m) * completions[r - 1][m] + completions[r - 1][m + 1];
    }
  }
  BigInt rank = rng.below(completions[size][0]);  // completions[n][0] == B_n

  std::vector<int> labels;
  labels.reserve(size);
  int open = 0;
  for (std::size_t k = 1; k <= size; ++k) {
    const BigInt& per_block = completions[size - k][static_cast<std::size_t>(open)];
    const BigInt existing = per_block * open;
    if (rank < existing) {
      labels.push_back(static_cast<int>(rank / per_block));
      rank %= per_block;
    } else {
      rank -= existing;
      labels.push_back(open++);
    }
  }
  return CoalitionStructure::from_labels(labels);
}

CoalitionStructure sample_truth(const TruthModel& model, int n, int repetition, Rng& rng) {
  if (n < 1) throw std::invalid_argument("population size must be at least 1");
  switch (model.kind) {
    case TruthModel::Kind::uniform:
      return random_partition(n, rng);
    case TruthModel::Kind::chinese_restaurant: {
      std::vector<int> labels;
      std::vector<int> sizes;
      for (int k = 0; k < n; ++k) {
        double u = rng.unit() * (k + model.theta);
        int table = static_cast<int>(sizes.size());
        for (std::size_t t = 0; t < sizes.size(); ++t) {
          if (u < sizes[t]) {
            table = static_cast<int>(t);
            break;
          }
          u -= sizes[t];
        }
        if (table == static_cast<int>(sizes.size())) sizes.push_back(0);
        ++sizes[static_cast<std::size_t>(table)];
        labels.push_back(table);
      }
      return CoalitionStructure::from_labels(labels);
    }
    case TruthModel::Kind::max_coalition: {
      AgentSet agents(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) agents[static_cast<std::size_t>(k)] = k + 1;
      for (std::size_t k = agents.size(); k > 1; --k) {
        std::swap(agents[k - 1], agents[rng.below(static_cast<std::uint64_t>(k))]);
      }
      std::vector<AgentSet> blocks;
      std::size_t pos = 0;
      while (pos < agents.size()) {
        const std::size_t cap =
            std::min<std::size_t>(static_cast<std::size_t>(model.max_size), agents.size() - pos);
        const std::size_t len = 1 + rng.below(static_cast<std::uint64_t>(cap));
        blocks.emplace_back(agents.begin() + static_cast<std::ptrdiff_t>(pos),
                            agents.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
      }
      return CoalitionStructure(n, std::move(blocks));
    }
    case TruthModel::Kind::fixed: {
      std::vector<const CoalitionStructure*> matching;
      for (const auto& t : model.fixed) {
        if (t.n() == n) matching.push_back(&t);
      }
      if (matching.empty()) {
        throw std::invalid_argument("no fixed truth has n=" + std::to_string(n));
      }
      return *matching[static_cast<std::size_t>(repetition) % matching.size()];
    }
  }
  throw std::invalid_argument("unknown truth model");
}

// ---------------------------------------------------------------------------
// Configuration.

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  if (policies.empty()) throw std::invalid_argument("at least one adversary policy is required");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
  for (int n : n_values) {
    if (n < 1) throw std::invalid_argument("every n must be at least 1");
  }
  if (family == Family::graphical) {
    for (int n : n_values) {
      if (n < 2) throw std::invalid_argument("graphical campaigns need n >= 2");
    }
    for (int d : d_values) {
      if (d < 2 || d % 2 != 0) throw std::invalid_argument("graphical d values must be even and >= 2");
    }
  }
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("format must be csv or json");
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stoi(item));
    } else {
      const int lo = std::stoi(item.substr(0, dots));
      const int hi = std::stoi(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("empty range '" + item + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  return out;
}

namespace {

std::vector<int> int_list_from_json(const Json& j) {
  if (j.is_string()) return parse_int_list(j.get<std::string>());
  if (j.is_number_integer()) return {j.get<int>()};
  return j.get<std::vector<int>>();
}

}  // namespace

std::vector<AdversaryPolicy> parse_policy_list(const std::string& text) {
  if (text == "sweep" || text == "all") return AdversaryPolicy::sweep();
  std::vector<AdversaryPolicy> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(AdversaryPolicy::parse(item));
  }
  return out;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  cfg.family = parse_family(j.at("family").get<std::string>());
  if (j.contains("n")) cfg.n_values = int_list_from_json(j.at("n"));
  if (j.contains("d")) cfg.d_values = int_list_from_json(j.at("d"));
  if (j.contains("truth_model")) cfg.truth_model = TruthModel::parse(j.at("truth_model").get<std::string>());
  if (j.contains("policies")) {
    const auto& p = j.at("policies");
    if (p.is_string()) {
      cfg.policies = parse_policy_list(p.get<std::string>());
    } else {
      cfg.policies.clear();
      for (const auto& item : p) cfg.policies.push_back(AdversaryPolicy::parse(item.get<std::string>()));
    }
  }
  if (j.contains("reps")) cfg.repetitions = j.at("reps").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("out")) cfg.output_path = j.at("out").get<std::string>();
  if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
  cfg.validate();
  return cfg;
}

Json to_json(const ExperimentConfig& cfg) {
  Json policies = Json::array();
  for (const auto& p : cfg.policies) policies.push_back(p.name());
  return {{"family", std::string(family_name(cfg.family))},
          {"n", cfg.n_values},
          {"d", cfg.d_values},
          {"truth_model", cfg.truth_model.name()},
          {"policies", std::move(policies)},
          {"reps", cfg.repetitions},
          {"seed", cfg.seed},
          {"threads", cfg.threads},
          {"out", cfg.output_path},
          {"format", cfg.format}};
}

// ---------------------------------------------------------------------------
// Campaign execution.

namespace {

struct GridPoint {
  int n;
  std::optional<int> d;
  int repetition;
};

std::vector<GridPoint> grid_points(const ExperimentConfig& cfg) {
  std::vector<GridPoint> out;
  for (int n : cfg.n_values) {
    std::vector<std::optional<int>> ds;
    if (cfg.family == Family::graphical) {
      if (cfg.d_values.empty()) {
        for (int d = 2; d <= n; d += 2) ds.emplace_back(d);
      } else {
        for (int d : cfg.d_values) {
          if (d <= n) ds.emplace_back(d);
        }
      }
    } else {
      ds.emplace_back(std::nullopt);
    }
    for (const auto& d : ds) {
      for (int r = 0; r < cfg.repetitions; ++r) out.push_back({n, d, r});
    }
  }
  return out;
}

std::vector<CampaignRow> run_point(const ExperimentConfig& cfg, const GridPoint& pt) {
  const std::uint64_t seed =
      derive_seed(cfg.seed, static_cast<std::uint64_t>(pt.n),
                  static_cast<std::uint64_t>(pt.d.value_or(0)),
                  static_cast<std::uint64_t>(pt.repetition));
  Rng rng(seed);
  const CoalitionStructure truth = sample_truth(cfg.truth_model, pt.n, pt.repetition, rng);
  const int c = static_cast<int>(truth.max_block_size());
  const int lower = info_lower_bound(pt.n);

  std::vector<CampaignRow> rows;
  std::optional<CoalitionStructure> first_recovered;
  for (const auto& policy : cfg.policies) {
    HiddenOracle oracle(truth, policy);
    const LearnerReport report = run_learner(cfg.family, oracle, pt.d);
    VerifyResult check = verify_report(report, truth, cfg.family, pt.d);
    if (check && lower > report.budget) {
      check = VerifyResult{false, "information lower bound exceeds the budget", std::nullopt};
    }
    if (check && first_recovered && !(*first_recovered == report.recovered)) {
      check = VerifyResult{false, "recovered partition depends on the adversary policy", std::nullopt};
    }
    if (!check) {
      Json run = to_json(report, seed);
      run["truth"] = to_json(truth);
      run["policy"] = policy.name();
      run["failure"] = check.message;
      if (check.round) run["failed_round"] = *check.round;
      Json transcript = Json::array();
      for (const auto& e : report.transcript.entries) transcript.push_back(transcript_entry_json(e));
      run["transcript"] = std::move(transcript);
      throw CampaignFailure("verification failed: " + check.message, std::move(run));
    }
    if (!first_recovered) first_recovered = report.recovered;
    rows.push_back(CampaignRow{cfg.family, pt.n, pt.d,
                               cfg.family == Family::auction_bitwise ? std::optional<int>(c)
                                                                     : std::nullopt,
                               policy.name(), seed, report.rounds, report.budget, lower, true});
  }
  return rows;
}

}  // namespace

CampaignResult run_campaign(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto points = grid_points(cfg);
  std::vector<std::vector<CampaignRow>> per_point(points.size());

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= points.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      try {
        per_point[k] = run_point(cfg, points[k]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(points.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  CampaignResult result;
  for (auto& rows : per_point) {
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const CampaignRow& a, const CampaignRow& b) {
                     return std::tie(a.family, a.n, a.d, a.seed) < std::tie(b.family, b.n, b.d, b.seed);
                   });
  return result;
}

// ---------------------------------------------------------------------------
// Output.

void emit_csv(std::ostream& out, const CampaignResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << family_name(r.family) << ',' << r.n << ',';
    if (r.d) out << *r.d;
    out << ',';
    if (r.c) out << *r.c;
    out << ',' << r.policy << ',' << r.seed << ',' << r.rounds << ',' << r.budget << ','
        << r.lower_bound << ',' << (r.recovered_ok ? "true" : "false") << '\n';
  }
}

Json to_json(const CampaignResult& result) {
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"family", std::string(family_name(r.family))},
                    {"n", r.n},
                    {"d", r.d ? Json(*r.d) : Json(nullptr)},
                    {"c", r.c ? Json(*r.c) : Json(nullptr)},
                    {"policy", r.policy},
                    {"seed", r.seed},
                    {"rounds", r.rounds},
                    {"budget", r.budget},
                    {"lower_bound", r.lower_bound},
                    {"recovered_ok", r.recovered_ok}});
  }
  return {{"rows", std::move(rows)}};
}

CampaignResult campaign_from_json(const Json& j) {
  CampaignResult result;
  for (const auto& r : j.at("rows")) {
    auto opt = [&](const char* key) -> std::optional<int> {
      if (!r.contains(key) || r.at(key).is_null()) return std::nullopt;
      return r.at(key).get<int>();
    };
    result.rows.push_back(CampaignRow{parse_family(r.at("family").get<std::string>()),
                                      r.at("n").get<int>(), opt("d"), opt("c"),
                                      r.at("policy").get<std::string>(),
                                      r.at("seed").get<std::uint64_t>(), r.at("rounds").get<int>(),
                                      r.at("budget").get<int>(), r.at("lower_bound").get<int>(),
                                      r.at("recovered_ok").get<bool>()});
  }
  return result;
}

void emit_json(std::ostream& out, const CampaignResult& result) {
  out << to_json(result).dump(2) << '\n';
}

void emit(std::ostream& out, const CampaignResult& result, const std::string& format) {
  if (format == "csv") {
    emit_csv(out, result);
  } else if (format == "json") {
    emit_json(out, result);
  } else {
    throw std::invalid_argument("format must be csv or json");
  }
}

void emit_file(const std::string& path, const CampaignResult& result, const std::string& format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "': " + std::strerror(errno));
  emit(out, result, format);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed: " + std::strerror(errno));
}

}  // namespace csl
