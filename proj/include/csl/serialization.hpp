#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "csl/core.hpp"
#include "csl/games.hpp"
#include "csl/learners.hpp"
#include "csl/oracle.hpp"

namespace csl {

using Json = nlohmann::json;

/// [[1,4],[2,3]] in canonical order.
Json to_json(const CoalitionStructure& s);
/// Population size is inferred from the largest agent unless `n` is given.
CoalitionStructure coalition_from_json(const Json& j, std::optional<int> n = std::nullopt);

/// {"family": "normal_form" | "congestion" | "auction", "n": ..., ...}.
/// Braess products serialize as their factor list; other congestion games
/// carry costs and strategy components explicitly.
Json to_json(const GameStrategyPair& g);
GameStrategyPair game_from_json(const Json& j);

/// {family, n, params, rounds, budget, recovered, seed}.
Json to_json(const LearnerReport& r, std::optional<std::uint64_t> seed = std::nullopt);

/// One JSON object per line: {"round", "game", "observation": "0110"}.
void write_transcript_jsonl(std::ostream& out, const Transcript& t);
Json transcript_entry_json(const TranscriptEntry& e);

}  // namespace csl
