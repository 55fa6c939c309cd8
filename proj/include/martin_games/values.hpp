#pragma once

#include <memory>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/oneshot.hpp"
#include "martin_games/strategy.hpp"
#include "martin_games/tree.hpp"

namespace martin_games {

struct ValueOptions {
  SolverConfig solver;
  // Stationary iteration (Discounted, Reachability): stop once the sup-norm
  // change is below `tolerance` (and, for Reachability, after >= 10|S| sweeps).
  double tolerance = 1e-10;
  int max_iterations = 200000;
};

// Minmax / maxmin values on every node of a history tree, [node * n + i].
// For n >= 3 the minmax is a bracket [minmax_lower, minmax]; minmax is the value
// the stored minimizers actually hold player i to.
struct ValueTable {
  std::shared_ptr<const HistoryTree> tree;
  int num_players = 0;
  bool has_minmax = false;
  bool has_maxmin = false;
  std::vector<double> minmax;
  std::vector<double> minmax_lower;
  std::vector<double> maxmin;
  // Opponents' mixes holding i to minmax at the node (i's entry: a best reply).
  std::vector<MixedProfile> minimizers;
  // Player i's one-shot maxmin mix at the node.
  std::vector<MixedAction> maxmin_strategy;

  // Stationary values for Discounted / Reachability, [state * n + i].
  std::vector<double> state_minmax;
  std::vector<double> state_minmax_lower;
  std::vector<double> state_maxmin;
  std::vector<MixedProfile> state_minimizers;
  int iterations = 0;
  double residual = 0.0;

  // Certified absolute error of every stored entry.
  double tolerance = 0.0;
  // False when some n >= 3 bracket is wider than the solver's certification tolerance.
  bool certified = true;

  std::size_t index(int node, PlayerId i) const {
    return static_cast<std::size_t>(node) * num_players + i;
  }
  double vbar(int node, PlayerId i) const { return minmax[index(node, i)]; }
  double vbar_lower(int node, PlayerId i) const { return minmax_lower[index(node, i)]; }
  double vlow(int node, PlayerId i) const { return maxmin[index(node, i)]; }
  // Node lookup; throws IncompleteMartinError when h is outside the tree.
  int node_of(const History& h) const;
};

// depth = largest stage covered. Finite-horizon tables always cover the full
// horizon (depth <= 0 selects it); other classes need depth >= 1.
ValueTable compute_minmax_values(const Game& game, int depth = 0, const ValueOptions& options = {});
ValueTable compute_maxmin_values(const Game& game, int depth = 0, const ValueOptions& options = {});
// Both tables in one pass.
ValueTable compute_values(const Game& game, int depth = 0, const ValueOptions& options = {});
// Finite horizon only: values on the subtree of `root`.
ValueTable compute_values(const Game& game, const History& root, const ValueOptions& options = {});

}  // namespace martin_games
