#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "csl/harness.hpp"
#include "csl/learners.hpp"
#include "csl/serialization.hpp"

namespace py = pybind11;
using namespace csl;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

AdversaryPolicy policy_of(const std::string& text) { return AdversaryPolicy::parse(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coalition structure learning: gadget games, observation oracles, learners";

  py::class_<CoalitionStructure>(m, "CoalitionStructure")
      .def(py::init<int, std::vector<AgentSet>>(), py::arg("n"), py::arg("blocks"))
      .def_static("singletons", &CoalitionStructure::singletons, py::arg("n"))
      .def_static("from_labels", &CoalitionStructure::from_labels, py::arg("labels"))
      .def_property_readonly("n", &CoalitionStructure::n)
      .def_property_readonly("blocks", &CoalitionStructure::blocks)
      .def("lookup_block", &CoalitionStructure::lookup_block, py::arg("agent"))
      .def("same_block", &CoalitionStructure::same_block)
      .def("merge_blocks", &CoalitionStructure::merge_blocks)
      .def("max_block_size", &CoalitionStructure::max_block_size)
      .def("__eq__", [](const CoalitionStructure& a, const CoalitionStructure& b) { return a == b; })
      .def("__repr__", [](const CoalitionStructure& s) { return "CoalitionStructure(" + to_string(s) + ")"; })
      .def("__str__", [](const CoalitionStructure& s) { return to_string(s); });

  m.def("bell_number", [](int n) {
    std::ostringstream s;
    s << bell_number(n);
    return py::int_(py::str(s.str()));
  }, py::arg("n"));
  m.def("info_lower_bound", &info_lower_bound, py::arg("n"));
  m.def("upper_bound", [](const std::string& family, int n, std::optional<int> d, std::optional<int> c) {
    return upper_bound(parse_family(family), n, d, c);
  }, py::arg("family"), py::arg("n"), py::arg("d") = py::none(), py::arg("c") = py::none());
  m.def("graphical_lower_bound", &graphical_lower_bound, py::arg("n"), py::arg("d"));

  py::class_<GameStrategyPair>(m, "Game")
      .def_property_readonly("n", &GameStrategyPair::n)
      .def("to_json", [](const GameStrategyPair& g) { return to_python(to_json(g)); })
      .def_static("from_json", [](const py::object& o) { return game_from_json(from_python(o)); })
      .def("__eq__", [](const GameStrategyPair& a, const GameStrategyPair& b) { return a == b; });

  m.def("prisoner_dilemma", [](int n, int i, int j) { return GameStrategyPair{prisoner_dilemma(n, i, j)}; },
        py::arg("n"), py::arg("beneficiary"), py::arg("decider"));
  m.def("pd_product", [](int n, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<PrisonerDilemmaFactor> fs;
    for (auto [i, j] : pairs) fs.push_back({i, j});
    return GameStrategyPair{FactoredNormalFormGame(n, std::move(fs))};
  }, py::arg("n"), py::arg("factors"));
  m.def("all_pairs_game", [](int n) { return GameStrategyPair{all_pairs_game(n)}; }, py::arg("n"));
  m.def("braess_product", [](int n, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<BraessFactor> fs;
    for (auto [i, j] : pairs) fs.push_back({i, j});
    return GameStrategyPair{braess_product(n, fs)};
  }, py::arg("n"), py::arg("factors"));
  m.def("auction_gadget", [](int n, const AgentSet& x, const AgentSet& y, const AgentSet& z) {
    return GameStrategyPair{auction_gadget(n, x, y, z)};
  }, py::arg("n"), py::arg("x"), py::arg("y"), py::arg("z"));
  m.def("first_move_game", [](int n) { return GameStrategyPair{first_move_game(n)}; }, py::arg("n"));
  m.def("max_degree", [](const GameStrategyPair& g) {
    return graphical_view(std::get<FactoredNormalFormGame>(g.game)).max_degree;
  }, py::arg("game"));

  m.def("observe", [](const CoalitionStructure& truth, const GameStrategyPair& g, const std::string& policy) {
    return evaluate_query(truth, g, policy_of(policy)).to_bitstring();
  }, py::arg("truth"), py::arg("game"), py::arg("policy") = "first");
  m.def("brute_force_observe", [](const CoalitionStructure& truth, const GameStrategyPair& g,
                                  const std::string& policy) {
    return brute_force_observe(truth, g, policy_of(policy)).to_bitstring();
  }, py::arg("truth"), py::arg("game"), py::arg("policy") = "first");

  m.def("learn", [](const std::string& family, const CoalitionStructure& truth, const std::string& policy,
                    std::optional<int> d, bool transcript) {
    const Family f = parse_family(family);
    HiddenOracle oracle(truth, policy_of(policy));
    const LearnerReport rep = run_learner(f, oracle, d);
    Json out = to_json(rep);
    const auto check = verify_report(rep, truth, f, d);
    out["verified"] = check.ok;
    if (!check.ok) out["failure"] = check.message;
    if (transcript) {
      Json t = Json::array();
      for (const auto& e : rep.transcript.entries) t.push_back(transcript_entry_json(e));
      out["transcript"] = std::move(t);
    }
    return to_python(out);
  }, py::arg("family"), py::arg("truth"), py::arg("policy") = "first", py::arg("d") = py::none(),
     py::arg("transcript") = false);

  m.def("random_partition", [](int n, std::uint64_t seed) {
    Rng rng(seed);
    return random_partition(n, rng);
  }, py::arg("n"), py::arg("seed") = 0);

  m.def("run_campaign", [](const py::object& config) {
    const auto result = run_campaign(config_from_json(from_python(config)));
    return to_python(to_json(result));
  }, py::arg("config"));
  m.def("campaign_csv", [](const py::object& config) {
    std::ostringstream out;
    emit_csv(out, run_campaign(config_from_json(from_python(config))));
    return out.str();
  }, py::arg("config"));

  py::register_exception<CampaignFailure>(m, "CampaignFailure", PyExc_RuntimeError);
}
