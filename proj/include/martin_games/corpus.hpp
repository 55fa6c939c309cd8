#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "martin_games/game.hpp"

namespace martin_games {

enum class CorpusFamily { kGeneral, kZeroSumTotal, kShiftInvariant, kConstant };

struct CorpusParams {
  int min_players = 2;
  int max_players = 3;
  int max_states = 3;
  int max_actions = 2;
  int min_horizon = 1;
  int max_horizon = 3;
  // Probability that a transition row is sparse (random support).
  double sparse_rows = 0.5;
  CorpusFamily family = CorpusFamily::kGeneral;
  // Oracle cap on full-horizon histories; the horizon is lowered until it fits.
  long history_cap = 20000;
};

const char* family_name(CorpusFamily f);
CorpusFamily parse_family(const std::string& name);

// Random finite-horizon game document (raw payoffs in [-1, 1]); deterministic in seed.
nlohmann::json random_game_json(std::uint64_t seed, const CorpusParams& params);
Game random_game(std::uint64_t seed, const CorpusParams& params);

struct CorpusEntry {
  std::string name;
  std::uint64_t seed = 0;
  nlohmann::json document;
};

// count games with per-game seeds derived from `seed`.
std::vector<CorpusEntry> generate_corpus(std::uint64_t seed, int count, const CorpusParams& params);
nlohmann::json corpus_manifest(std::uint64_t seed, const CorpusParams& params,
                               const std::vector<CorpusEntry>& entries);

}  // namespace martin_games
