#pragma once

#include <memory>
#include <string>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/oneshot.hpp"
#include "martin_games/strategy.hpp"
#include "martin_games/tree.hpp"
#include "martin_games/values.hpp"

namespace martin_games {

struct MartinFunction {
  std::shared_ptr<const HistoryTree> tree;
  int num_players = 0;
  std::vector<double> values;  // [node * n + i]
  double epsilon = 0.0;
  PayoffClass payoff_class = PayoffClass::kFiniteHorizon;
  // Certified numeric tolerance of the stored values.
  double tolerance = 0.0;
  int depth = 0;

  // Discounted construction only.
  std::vector<double> state_values;  // v-hat, [state * n + i]
  double vi_error = 0.0;             // bound on |v-hat - v|
  // Range of min(vbar - D, D - (vbar - eps)) at the root, from the VI error.
  double slack_low = 0.0;
  double slack_high = 0.0;

  double at(int node, PlayerId i) const { return values[static_cast<std::size_t>(node) * num_players + i]; }
  // Throws IncompleteMartinError outside the domain.
  double at(const History& h, PlayerId i) const;
};

// D = minmax values (eps = 0).
MartinFunction martin_finite_horizon(const Game& game, const ValueOptions& options = {});
MartinFunction martin_finite_horizon(const Game& game, const ValueTable& values);

// D(h) = discounted prefix + lambda^(stage-1) (v-hat(s_h) - eps/2), defined up to `depth`.
MartinFunction martin_discounted(const Game& game, double epsilon, int depth,
                                 const ValueOptions& options = {});

// One-shot game G(D, h) at a node of D's tree.
OneShotTensor build_oneshot(const MartinFunction& d, int node);
OneShotTensor build_oneshot(const Game& game, const MartinFunction& d, const History& h);

struct CertificationReport {
  int property = 0;
  bool pass = true;
  bool skipped = false;      // global part of property 3 skipped after a local failure
  bool statistical = false;  // sample-based check
  double worst_violation = 0.0;
  double tolerance = 0.0;
  std::string witness;  // history key of the worst violation
  PlayerId witness_player = -1;
  std::string note;
  long checked = 0;
};

// vbar - eps - tol <= D <= vbar + tol on D's domain.
CertificationReport certify_property1(const MartinFunction& d, const ValueTable& values, double epsilon,
                                      double tol = 1e-9);

// D(h) <= one-shot minmax of G(D, h) + tol at every non-leaf node (bracket
// lower end for n >= 3).
CertificationReport certify_property2(const MartinFunction& d, const Game& game, double tol = 1e-9,
                                      const SolverConfig& config = {});

// Finite horizon: local condition E[D(next) | h, sigma(h)] >= minmax of G(D, h) - tol
// at every h extending `from`, then minmax of G(D, h) <= E_{h,sigma}[f] + tol.
CertificationReport certify_property3(const MartinFunction& d, const Game& game,
                                      const StrategyProfile& profile, const History& from,
                                      double tol = 1e-9, const SolverConfig& config = {});

}  // namespace martin_games
