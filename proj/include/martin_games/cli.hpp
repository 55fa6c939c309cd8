#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "martin_games/corpus.hpp"
#include "martin_games/report.hpp"

namespace martin_games {

struct RunConfig {
  std::string subcommand;  // validate, values, martin, synth, mediate, solve-subgame, corpus, check-zero-sum
  std::string mode;        // synth: maxmin | acceptable
  std::string game_path;
  double epsilon = 0.1;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  long rollouts = 0;
  int depth = 0;  // 0: full horizon (finite horizon) or 3 (other classes)
  std::optional<double> tol;  // default 1e-9; 1e-6 for check-zero-sum
  std::string out_dir;
  bool strict = false;
  // corpus
  int count = 10;
  std::string family = "general";
  int min_players = 2, max_players = 3;
  int max_states = 3, max_actions = 2;
  int min_horizon = 1, max_horizon = 3;
  double sparse_rows = 0.5;
};

// Hashed configuration: everything except the output directory.
nlohmann::json config_json(const RunConfig& config);

// Corpus size parameters from the flags; throws on an unknown family.
CorpusParams corpus_params(const RunConfig& config);

// Throws InvalidInputError on inconsistent settings.
void check_config(const RunConfig& config);

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitAssertion = 4;
inline constexpr int kExitCap = 5;

struct RunResult {
  int exit_code = kExitOk;
  std::optional<Report> report;
  std::string error;  // set when the run aborted
  // Extra artifacts (relative path -> text), written under out_dir.
  std::vector<std::pair<std::string, std::string>> files;
};

// Runs one subcommand; never throws. Artifacts are written only when out_dir is set.
RunResult run(const RunConfig& config);

}  // namespace martin_games
