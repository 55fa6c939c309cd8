#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/strategy.hpp"
#include "martin_games/tree.hpp"

namespace martin_games {

// Normal-form game on the base game's action sets; entries [profile * n + i].
// Profile encoding matches Game (player 0 most significant).
struct OneShotTensor {
  std::vector<int> actions;
  std::vector<int> strides;
  int num_profiles = 1;
  std::vector<double> payoff;
  std::string history;  // provenance: canonical key of the history
  std::string source;   // provenance: which function the entries come from

  int num_players() const { return static_cast<int>(actions.size()); }
  double at(ProfileIndex a, PlayerId i) const { return payoff[static_cast<std::size_t>(a) * num_players() + i]; }
  ActionId action_of(ProfileIndex a, PlayerId i) const { return (a / strides[i]) % actions[i]; }
  ProfileIndex with_action(ProfileIndex a, PlayerId i, ActionId ai) const {
    return a + (ai - action_of(a, i)) * strides[i];
  }
};

OneShotTensor make_tensor(std::vector<int> actions, std::vector<double> payoff);

// Entry (a, i) = sum over children (h,a,s) of p(s | s_h, a) * values[child * n + i].
OneShotTensor build_oneshot(const HistoryTree& tree, int node, const std::vector<double>& values);

struct SolverConfig {
  double regret_tolerance = 1e-7;
  int multistart = 8;
  int grid_resolution = 64;
  double pivot_tolerance = 1e-12;
  // Bracket width above which an independent minmax is flagged uncertified.
  double certification_tolerance = 1e-9;
  std::uint64_t seed = 0;
  bool exact_lp = false;
  int best_response_iterations = 4000;
};

struct SolveResult {
  double value = 0.0;
  double lower = 0.0;       // certified lower end of the bracket
  double upper = 0.0;       // value attained by the returned strategies
  double correlated = 0.0;  // correlated-coalition value (an LP)
  MixedProfile strategies;
  std::vector<double> regret;
  double duality_gap = 0.0;
  std::string method;
  bool certified = true;
  bool nonunique = false;
};

// Row player maximizes. strategies = {row mix, column mix}.
SolveResult zero_sum_value(const std::vector<std::vector<double>>& matrix,
                           const SolverConfig& config = {});

// min over independent x_{-i} of max over a_i. strategies[j] for j != i is the
// minimizing profile, strategies[i] a pure best reply to it.
SolveResult minmax_vs_independent(const OneShotTensor& tensor, PlayerId i,
                                  const SolverConfig& config = {});

// max over x_i of min over pure a_{-i}; strategies[i] is optimal, the others
// form the lexicographically first pure best response against it.
SolveResult maxmin_oneshot(const OneShotTensor& tensor, PlayerId i, const SolverConfig& config = {});

SolveResult nash_equilibrium(const OneShotTensor& tensor, const SolverConfig& config = {});

std::vector<double> regret(const OneShotTensor& tensor, const MixedProfile& x);

// Expected payoff of every player under x.
std::vector<double> expected_payoffs(const OneShotTensor& tensor, const MixedProfile& x);

// Expected payoff of player i for each own action against x_{-i}.
std::vector<double> action_values(const OneShotTensor& tensor, const MixedProfile& x, PlayerId i);

}  // namespace martin_games
