#pragma once

#include <cstdint>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/strategy.hpp"
#include "martin_games/tree.hpp"

namespace martin_games {

enum class EvalMode { kExact, kTruncated };

// Per-player payoff of a run prefix. Exact mode needs the payoff to be
// determined by the prefix; truncated mode evaluates the prefix as if the run
// stopped there (truncation stage = prefix stage).
std::vector<double> payoff_eval(const Game& game, const History& run, EvalMode mode);

// Payoff of each full-horizon leaf of a finite-horizon tree, [node * n + i]
// (entries of internal nodes are 0).
std::vector<double> leaf_payoffs(const HistoryTree& tree);

// Tree over the whole payoff-relevant horizon of a finite-horizon game.
HistoryTree full_tree(const Game& game, const History& root, std::size_t cap = kDefaultTreeCap);
HistoryTree full_tree(const Game& game, std::size_t cap = kDefaultTreeCap);

// E_{h,sigma}[f] at every node of a full-horizon tree, [node * n + i].
std::vector<double> evaluate_all(const HistoryTree& tree, const std::vector<MixedProfile>& policy);

// Exact E_{h,sigma}[f] for finite-horizon payoffs.
std::vector<double> expected_payoff(const Game& game, const StrategyProfile& profile,
                                    const History& h);

struct MonteCarloEstimate {
  std::vector<double> mean;
  std::vector<double> standard_error;
  long rollouts = 0;
  int truncation_stage = 0;
};

// Seeded Monte Carlo estimate; non-finite-horizon runs are truncated at
// `stages` and evaluated in truncated mode.
MonteCarloEstimate expected_payoff_mc(const Game& game, const StrategyProfile& profile,
                                      const History& h, long rollouts, std::uint64_t seed,
                                      int stages = 100);

// Game whose initial state is s_h and whose payoff is r -> f(h r). Past the
// horizon the view has constant payoff (see is_degenerate_view).
Game subgame_view(const Game& game, const History& h);
bool is_degenerate_view(const Game& game);

// Positive-probability extension of h by `stages` further rounds.
History sample_run(const Game& game, const StrategyProfile& profile, const History& h, int stages,
                   std::uint64_t seed);

class Rng;
// One stage of play from h under the given mixed profile.
ProfileIndex sample_profile(const Game& game, const MixedProfile& x, Rng& rng);
StateId sample_state(const Game& game, StateId s, ProfileIndex a, Rng& rng);

}  // namespace martin_games
