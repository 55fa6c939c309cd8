#pragma once

#include <cstddef>
#include <vector>

#include "martin_games/game.hpp"

namespace test_games {

using namespace martin_games;

// One-state repeated game; rewards[profile][player] each round.
inline Game repeated(const std::vector<int>& actions, const std::vector<std::vector<double>>& rewards,
                     int horizon) {
  int profiles = 1;
  for (int k : actions) profiles *= k;
  FiniteHorizon fh;
  fh.horizon = horizon;
  for (const auto& row : rewards) fh.rewards.insert(fh.rewards.end(), row.begin(), row.end());
  return Game::make(static_cast<int>(actions.size()), 1, actions, std::vector<double>(profiles, 1.0),
                    PayoffSpec{fh});
}

// Prisoner's dilemma, action 0 = cooperate.
inline Game prisoners_dilemma(int horizon) {
  return repeated({2, 2}, {{3, 3}, {0, 5}, {5, 0}, {1, 1}}, horizon);
}

// Every payoff zero.
inline Game constant_game(int players, int horizon) {
  std::vector<int> actions(players, 2);
  const int profiles = 1 << players;
  return repeated(actions, std::vector<std::vector<double>>(profiles, std::vector<double>(players, 0.0)),
                  horizon);
}

// Two players with one action each; from state 0 the chain moves to state 1 with
// p1, to state 2 with p2 and stays otherwise. States 1 and 2 are absorbing.
inline Game leaky_chain(double p1, double p2, int horizon) {
  std::vector<double> tr = {1.0 - p1 - p2, p1, p2, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};
  FiniteHorizon fh;
  fh.horizon = horizon;
  fh.terminal = {0.0, 0.0, 1.0, 0.0, 0.0, 1.0};
  return Game::make(2, 3, {1, 1}, tr, PayoffSpec{fh});
}

}  // namespace test_games
