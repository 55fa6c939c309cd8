#pragma once

#include <memory>
#include <string>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/martin.hpp"
#include "martin_games/oneshot.hpp"
#include "martin_games/strategy.hpp"
#include "martin_games/values.hpp"

namespace martin_games {

// sigma*_i(h) = one-shot maxmin mix of G(vlow_i, h) at every non-leaf node.
BehaviorStrategy subgame_maxmin_strategy(const Game& game, PlayerId i, const ValueTable& values);
BehaviorStrategy subgame_maxmin_strategy(const Game& game, PlayerId i, const ValueOptions& options = {});

struct GuaranteeReport {
  bool pass = true;
  double epsilon = 0.0;
  double tolerance = 0.0;
  double worst_violation = 0.0;
  std::string witness;
  PlayerId witness_player = -1;
  long checked = 0;
};

// For every node: the worst case of sigma*_i against a correlated coalition of
// all opponents (exact DP) is >= vlow_i(h) - eps - tol.
GuaranteeReport verify_subgame_maxmin(const Game& game, const BehaviorStrategy& strategy,
                                      const ValueTable& values, double epsilon, double tol = 1e-9);

struct AcceptableProfile {
  StrategyProfile profile;
  std::vector<double> regret;  // max one-shot regret per node (0 at leaves)
  double max_regret = 0.0;
  std::vector<std::string> method;  // solver used per node
};

// sigma*(h) = one-shot equilibrium of G(D, h) at every non-leaf node of D's tree.
AcceptableProfile acceptable_profile(const Game& game, const MartinFunction& d, const SolverConfig& config = {});

// E_{h,sigma}[f_i] >= vbar_i(h) - eps - tol at every node, all players.
GuaranteeReport verify_acceptable(const Game& game, const StrategyProfile& profile, const ValueTable& values,
                                  double epsilon, double tol = 1e-9);

struct ChainReport {
  bool pass = true;
  long checked = 0;
  long holding = 0;
  double worst_violation = 0.0;
  std::string witness;
  PlayerId witness_player = -1;
};

// E_{h,sigma}[f_i] >= vbarO_i(D,h) - tol >= D_i(h) - tol >= vbar_i(h) - eps - tol per node.
ChainReport verify_payoff_chain(const Game& game, const MartinFunction& d, const ValueTable& values,
                                const StrategyProfile& profile, double epsilon, double tol = 1e-9,
                                const SolverConfig& config = {});

// Opponents of `target` holding it to vbar_target(anchor) + delta from the anchor on.
struct PunishmentPlan {
  PlayerId target = 0;
  History anchor;
  double delta = 0.0;
  double bound = 0.0;            // vbar_target(anchor) + delta
  double certified_value = 0.0;  // best-response value of target against the plan
  bool widened = false;          // delta inflated by an uncertified bracket or iteration residual
  StrategyProfile profile;       // target's entries are placeholders

  bool holds(double tol = 1e-9) const { return certified_value <= bound + tol; }
};

// Finite horizon: backward-induction minimizers. Reachability: stationary minimizers.
PunishmentPlan punishment_profile(const Game& game, const ValueTable& values, PlayerId i, const History& h,
                                  double delta);

}  // namespace martin_games
