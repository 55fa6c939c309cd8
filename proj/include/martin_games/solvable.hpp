#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "martin_games/detection.hpp"
#include "martin_games/game.hpp"
#include "martin_games/martin.hpp"
#include "martin_games/strategy.hpp"
#include "martin_games/synth.hpp"
#include "martin_games/values.hpp"

namespace martin_games {

// 5 delta + 4 (n + 1) delta^(1/4) < eps.
bool delta_condition(double delta, double epsilon, int num_players);
// Largest 2^-k (k >= 1) satisfying delta_condition.
double choose_delta(double epsilon, int num_players);

// Per-node processes under sigma* on the full tree, [node * n + i]:
// m = E_{h,sigma*}[f], y = D(h), w = E_{sigma*(h)}[D(next)] (w = y at leaves).
struct Processes {
  std::shared_ptr<const HistoryTree> tree;
  int num_players = 0;
  std::vector<MixedProfile> policy;
  std::vector<double> m, y, w;
  std::vector<double> reach;  // P_{sigma*} of every node from the root

  double at(const std::vector<double>& table, int v, PlayerId i) const {
    return table[static_cast<std::size_t>(v) * num_players + i];
  }
};

Processes compute_processes(const MartinFunction& d, const StrategyProfile& sigma_star);

struct SubmartingaleReport {
  bool pass = true;
  double worst = 0.0;  // largest Y - W
  std::string witness;
  PlayerId witness_player = -1;
  long checked = 0;
};

// W_i(h) >= Y_i(h) - tol at every node.
SubmartingaleReport verify_submartingale(const Processes& p, double tol = 1e-9);

struct TargetHistory {
  History h_star;
  int node = 0;
  int n_star = 0;
  std::vector<double> c;
  int n0 = 0, n1 = 0, n2 = 0, n3 = 0;
  double constant = 2.0 / 3.0;
  // Measured P_{sigma*} of the three events at n1, n2, n3, and of R-hat_{n0}.
  double p1 = 0.0, p2 = 0.0, p3 = 0.0, p_r0 = 0.0;
  double p_r0_given_h_star = 0.0;  // > 1 - delta
  std::vector<char> in_r0;         // per tree node (leaves only)
};

// Exact scan: smallest n1, n2, n3, then the first node (breadth first) of stage
// >= n0 with positive probability and P(R-hat_{n0} | h) > 1 - delta.
TargetHistory find_target_history(const Processes& p, double delta, double constant = 2.0 / 3.0);

struct GoodSet {
  std::vector<TargetSet> q;          // Q_i
  std::vector<double> zeta;          // [node * n + i] = zeta_i(r, n*, stage(node)), subtree of h*
  std::vector<int> nu;               // [node * n + i], 0 when not fired
  std::vector<char> in_r_hat;        // per leaf
  std::vector<char> in_k;            // per leaf
  double p_k = 0.0;                  // P_{h*,sigma*}(K)
  double bound = 0.0;                // 1 - (n + 1) sqrt(delta)
  ExitSet z;
  BlameFunction blame;
  BlameErrorReport blame_error;
  std::vector<signed char> subset;   // [leaf * n + i] in {1,2,3,4}; 0 elsewhere
  bool partition_ok = true;
  std::string partition_witness;
  long leaves = 0;
};

// Throws SolverError (best_residual = measured P(K)) when P(K) <= 1 - (n+1) sqrt(delta).
GoodSet build_good_set(const Game& game, const ValueTable& values, const Processes& p,
                       const TargetHistory& target, double delta, long blame_rollouts = 0,
                       std::uint64_t seed = 0);

struct SigmaHat {
  StrategyProfile profile;  // automaton anchored at h*
  int memory_states = 0;
  std::vector<PunishmentPlan> plans;  // per element of Z, against the blamed player
  bool plans_hold = true;
};

SigmaHat assemble_sigma_hat(const Game& game, const ValueTable& values, const Processes& p,
                            const TargetHistory& target, const GoodSet& good, double delta);

struct SubsetDiagnostic {
  int subset = 0;
  double probability = 0.0;
  double payoff_mass = 0.0;  // E[f_i ; E_k]
  double bound = 0.0;
  bool within = true;
  std::string witness;  // heaviest leaf of the subset
};

struct PlayerVerdict {
  double c = 0.0;
  double on_path = 0.0;
  double on_path_bound = 0.0;  // c - 2 (n + 1) sqrt(delta)
  bool on_path_ok = true;
  double best_value = 0.0;
  double gain = 0.0;
  bool gain_ok = true;
  std::vector<SubsetDiagnostic> subsets;  // E1..E4 under the best deviation
};

struct SolvableReport {
  bool pass = false;  // on-path payoffs and gains
  double epsilon = 0.0;
  double delta = 0.0;
  double sqrt_delta = 0.0;
  double eta = 0.0;
  double final_bound = 0.0;  // 5 delta + eta + sqrt(delta) + 2 (n + 1) sqrt(delta)
  bool final_bound_ok = false;
  std::vector<PlayerVerdict> players;
  bool diagnostics_ok = true;
  // Invariants measured on the instance.
  bool c_above_minmax = true;    // c_i >= vbar_i(h*) - delta - tol
  bool y_w_close = true;         // |Y(h*) - W(h*)| <= 2 delta + tol
  bool k_minmax_low = true;      // vbar_i(r^k) <= c_i + 2 delta + tol on K
  std::string witness;
};

SolvableReport verify_solvable(const Game& game, const ValueTable& values, const Processes& p,
                               const TargetHistory& target, const GoodSet& good, const SigmaHat& sigma_hat,
                               double epsilon, double delta, double tol = 1e-9);

struct SolvableOptions {
  std::optional<double> delta;      // overrides choose_delta
  double constant = 2.0 / 3.0;      // the three 2/3 thresholds
  long blame_rollouts = 0;          // 0 = exact blame measurement
  std::uint64_t seed = 0;
  double tol = 1e-9;
  SolverConfig solver;
};

struct SolvablePipeline {
  double epsilon = 0.0;
  double delta = 0.0;
  ValueTable values;
  MartinFunction martin;
  AcceptableProfile acceptable;
  Processes processes;
  TargetHistory target;
  GoodSet good;
  SigmaHat sigma_hat;
  SolvableReport report;
};

// choose_delta -> find_target_history -> build_good_set -> assemble_sigma_hat -> verify_solvable.
SolvablePipeline solve_subgame(const Game& game, double epsilon, const SolvableOptions& options = {});

struct ShiftInvarianceReport {
  bool pass = true;
  bool statistical = false;
  long pairs = 0;
  double worst = 0.0;
  std::string witness_a, witness_b;  // violating prefix pair
};

// Finite horizon: exhaustive prefix swap among equal-length histories ending in
// the same state, up to `depth`. Mean payoff / reachability: truncated spot
// checks with random continuations. Discounted payoffs are rejected outright.
ShiftInvarianceReport check_shift_invariance(const Game& game, int depth = 3, long samples = 64,
                                             std::uint64_t seed = 0);

struct LiftResult {
  StateId initial_state = 0;
  std::shared_ptr<const Game> view;  // from the final state of h*, payoff r -> f(h* r)
  StrategyProfile profile;   // sigma-hat re-anchored at the single-state history
  ShiftInvarianceReport check;
};

// Throws InvalidInputError when the payoff is not declared shift-invariant or the
// declaration fails the check (message names the violating prefix pair).
LiftResult shift_invariant_lift(const Game& game, const TargetHistory& target, const SigmaHat& sigma_hat,
                                int depth = 3, std::uint64_t seed = 0);

}  // namespace martin_games
