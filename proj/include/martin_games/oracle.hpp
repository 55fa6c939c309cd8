#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/strategy.hpp"
#include "martin_games/tree.hpp"
#include "martin_games/values.hpp"

namespace martin_games {

inline constexpr std::size_t kOracleHistoryCap = 20000;

struct BestResponse {
  double value = 0.0;                // at the requested node
  std::vector<double> node_values;   // best-response value of every node of the subtree
  std::vector<ActionId> strategy;    // optimal pure action per node (-1 at leaves / outside)
};

// sup over player i's behavior strategies of E[f_i] from `node`, opponents playing
// policy[v] (player i's entries ignored). Finite horizon, full tree.
BestResponse best_response_value(const HistoryTree& tree, const std::vector<MixedProfile>& policy,
                                 PlayerId i, int node = 0);
// Environment given as any profile (automata are replayed along each history).
BestResponse best_response_value(const Game& game, const StrategyProfile& environment, PlayerId i,
                                 const History& h);

// Same quantity by enumerating every pure strategy of player i on the subtree.
// Throws CapExceededError when there are more than `cap` strategies.
double pure_strategy_enumeration(const HistoryTree& tree, const std::vector<MixedProfile>& policy,
                                 PlayerId i, int node = 0, double cap = 1 << 22);

struct EnumerationRow {
  History history;
  double probability = 0.0;
  std::vector<double> payoff;
};

struct EnumerationTable {
  std::vector<EnumerationRow> rows;
  double total_probability() const;
  std::vector<double> expected_payoff() const;
};

// Exact distribution over full-horizon histories extending h (depth-first, independent
// of the tree code). Rows with probability 0 under the profile are dropped.
EnumerationTable enumerate(const Game& game, const StrategyProfile& profile, const History& h,
                           std::size_t cap = kOracleHistoryCap);

struct GridBracket {
  double lower = 0.0;
  double upper = 0.0;
  int resolution = 0;
};

// Minmax of player i at h by exhaustive search over opponents' behavior strategies
// restricted to a grid of step 1/resolution (opponents with at most two actions).
// The search decomposes stage by stage: the best-reply value of a fixed behavior
// profile is computed backward, so the grid minimum is taken node by node.
GridBracket grid_minmax(const Game& game, PlayerId i, int resolution, const History& h);
GridBracket grid_minmax(const Game& game, PlayerId i, int resolution);

// gain_i = best_response_value - E_{h,profile}[f_i].
std::vector<double> equilibrium_check(const Game& game, const StrategyProfile& profile, const History& h);

struct ZeroSumTotalReport {
  bool pass = false;
  double sum = 0.0;          // sum of minmax values at the root, original units
  double tolerance = 0.0;    // n * tol
  double worst_total = 0.0;  // largest |sum of payoffs| over complete histories
  std::string witness;       // history with the worst total
};

// Requires sum_i f_i = 0 on every complete history (original units); otherwise throws
// InvalidInputError naming a witness.
ZeroSumTotalReport zero_sum_total_check(const Game& game, const ValueTable& values, double tol = 1e-6);

}  // namespace martin_games
