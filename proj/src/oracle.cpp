#include "martin_games/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "martin_games/errors.hpp"
#include "martin_games/payoff.hpp"

namespace martin_games {

BestResponse best_response_value(const HistoryTree& tree, const std::vector<MixedProfile>& policy,
                                 PlayerId i, int node) {
  const Game& game = tree.game();
  const int n = game.num_players();
  const auto leaves = leaf_payoffs(tree);
  BestResponse br;
  br.node_values.assign(tree.size(), 0.0);
  br.strategy.assign(tree.size(), -1);
  for (int v = tree.size() - 1; v >= node; --v) {
    if (!tree.is_ancestor(node, v)) continue;
    if (tree.is_leaf(v)) {
      br.node_values[v] = leaves[static_cast<std::size_t>(v) * n + i];
      continue;
    }
    std::vector<double> by_action(game.num_actions(i), 0.0);
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      const double w = others_probability(game, policy[v], a, i);
      if (w == 0.0) continue;
      double cont = 0.0;
      for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c)
        cont += tree.step_probability(c) * br.node_values[c];
      by_action[game.action_of(a, i)] += w * cont;
    }
    int best = 0;
    for (int b = 1; b < game.num_actions(i); ++b)
      if (by_action[b] > by_action[best]) best = b;
    br.node_values[v] = by_action[best];
    br.strategy[v] = best;
  }
  br.value = br.node_values[node];
  return br;
}

BestResponse best_response_value(const Game& game, const StrategyProfile& environment, PlayerId i,
                                 const History& h) {
  const HistoryTree tree = full_tree(game, h);
  return best_response_value(tree, environment.materialize(tree), i, 0);
}

double pure_strategy_enumeration(const HistoryTree& tree, const std::vector<MixedProfile>& policy,
                                 PlayerId i, int node, double cap) {
  const Game& game = tree.game();
  const int n = game.num_players();
  const auto leaves = leaf_payoffs(tree);
  std::vector<int> decision;
  for (int v = node; v < tree.size(); ++v)
    if (!tree.is_leaf(v) && tree.is_ancestor(node, v)) decision.push_back(v);
  const int k = game.num_actions(i);
  const double count = std::pow(static_cast<double>(k), static_cast<double>(decision.size()));
  if (count > cap) throw CapExceededError("too many pure strategies to enumerate", count);
  std::vector<ActionId> choice(tree.size(), 0);
  double best = -1e300;
  std::vector<double> value(tree.size(), 0.0);
  for (;;) {
    // Forward evaluation of this pure strategy.
    for (int v = tree.size() - 1; v >= node; --v) {
      if (!tree.is_ancestor(node, v)) continue;
      if (tree.is_leaf(v)) {
        value[v] = leaves[static_cast<std::size_t>(v) * n + i];
        continue;
      }
      double total = 0.0;
      for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
        if (game.action_of(a, i) != choice[v]) continue;
        const double w = others_probability(game, policy[v], a, i);
        if (w == 0.0) continue;
        for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c)
          total += w * tree.step_probability(c) * value[c];
      }
      value[v] = total;
    }
    best = std::max(best, value[node]);
    std::size_t d = 0;
    while (d < decision.size() && ++choice[decision[d]] == k) choice[decision[d++]] = 0;
    if (d == decision.size()) break;
  }
  return best;
}

double EnumerationTable::total_probability() const {
  double total = 0.0;
  for (const auto& r : rows) total += r.probability;
  return total;
}

std::vector<double> EnumerationTable::expected_payoff() const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (out.empty()) out.assign(r.payoff.size(), 0.0);
    for (std::size_t i = 0; i < r.payoff.size(); ++i) out[i] += r.probability * r.payoff[i];
  }
  return out;
}

EnumerationTable enumerate(const Game& game, const StrategyProfile& profile, const History& h,
                           std::size_t cap) {
  const int full = full_horizon_stage(game);
  if (full < 0) throw UnsupportedError("enumeration needs a finite-horizon payoff");
  const int target = std::max(full, h.stage());
  EnumerationTable table;
  std::function<void(const History&, double)> walk = [&](const History& cur, double prob) {
    if (cur.stage() >= target) {
      if (table.rows.size() >= cap)
        throw CapExceededError("enumeration exceeds the history cap", static_cast<double>(cap) + 1);
      table.rows.push_back({cur, prob, payoff_eval(game, cur, EvalMode::kExact)});
      return;
    }
    const MixedProfile x = profile.at(game, cur);
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      const double pa = profile_probability(game, x, a);
      if (pa == 0.0) continue;
      for (StateId s = 0; s < game.num_states(); ++s) {
        const double p = game.transition(cur.last_state(), a, s);
        if (p > 0.0) walk(cur.extended(a, s), prob * pa * p);
      }
    }
  };
  walk(h, 1.0);
  return table;
}

GridBracket grid_minmax(const Game& game, PlayerId i, int resolution, const History& h) {
  if (resolution < 1) throw InvalidInputError("grid resolution must be >= 1");
  const int n = game.num_players();
  std::vector<PlayerId> opp;
  for (PlayerId j = 0; j < n; ++j) {
    if (j == i) continue;
    if (game.num_actions(j) > 2) throw InvalidInputError("grid minmax supports opponents with at most two actions");
    if (game.num_actions(j) == 2) opp.push_back(j);
  }
  const HistoryTree tree = full_tree(game, h, kOracleHistoryCap * 4);
  const auto leaves = leaf_payoffs(tree);
  std::vector<double> value(tree.size(), 0.0);
  for (int v = tree.size() - 1; v >= 0; --v) {
    if (tree.is_leaf(v)) {
      value[v] = leaves[static_cast<std::size_t>(v) * n + i];
      continue;
    }
    // Expected continuation per profile.
    std::vector<double> cont(game.num_profiles(), 0.0);
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a)
      for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c)
        cont[a] += tree.step_probability(c) * value[c];
    double best = 1e300;
    std::vector<int> idx(opp.size(), 0);
    MixedProfile x;
    for (PlayerId j = 0; j < n; ++j) x.push_back(pure_action(game.num_actions(j), 0));
    for (;;) {
      for (std::size_t k = 0; k < opp.size(); ++k) {
        const double p = static_cast<double>(idx[k]) / resolution;
        x[opp[k]] = {1 - p, p};
      }
      std::vector<double> by_action(game.num_actions(i), 0.0);
      for (ProfileIndex a = 0; a < game.num_profiles(); ++a)
        by_action[game.action_of(a, i)] += others_probability(game, x, a, i) * cont[a];
      best = std::min(best, *std::max_element(by_action.begin(), by_action.end()));
      int d = static_cast<int>(opp.size()) - 1;
      while (d >= 0 && ++idx[d] > resolution) idx[d--] = 0;
      if (d < 0) break;
    }
    value[v] = best;
  }
  GridBracket out;
  out.resolution = resolution;
  out.upper = value[0];
  // Each stage: every opponent is within 1/(2 resolution) of a grid point, and the
  // payoff is 1-Lipschitz in each coordinate when values lie in [0, 1].
  const int rounds = tree.max_stage() - tree.root_stage();
  out.lower = out.upper - rounds * static_cast<double>(opp.size()) / (2.0 * resolution);
  return out;
}

GridBracket grid_minmax(const Game& game, PlayerId i, int resolution) {
  return grid_minmax(game, i, resolution, History(game.initial_state()));
}

std::vector<double> equilibrium_check(const Game& game, const StrategyProfile& profile, const History& h) {
  const HistoryTree tree = full_tree(game, h);
  const auto policy = profile.materialize(tree);
  const auto expected = evaluate_all(tree, policy);
  std::vector<double> gains(game.num_players());
  for (PlayerId i = 0; i < game.num_players(); ++i)
    gains[i] = best_response_value(tree, policy, i, 0).value - expected[i];
  return gains;
}

ZeroSumTotalReport zero_sum_total_check(const Game& game, const ValueTable& values, double tol) {
  const int n = game.num_players();
  const Normalization& norm = game.normalization();
  const HistoryTree tree = full_tree(game, kOracleHistoryCap * 4);
  const auto leaves = leaf_payoffs(tree);
  ZeroSumTotalReport r;
  for (int v = tree.stage_begin(tree.max_stage()); v < tree.size(); ++v) {
    double total = 0.0;
    for (PlayerId i = 0; i < n; ++i) total += norm.denormalize(i, leaves[static_cast<std::size_t>(v) * n + i]);
    if (std::abs(total) >= r.worst_total) {
      r.worst_total = std::abs(total);
      r.witness = tree.key(v);
    }
  }
  if (r.worst_total > 1e-9)
    throw InvalidInputError("payoffs do not sum to zero on history " + r.witness + " (total " +
                            std::to_string(r.worst_total) + ")");
  for (PlayerId i = 0; i < n; ++i) r.sum += norm.denormalize(i, values.vbar(0, i));
  r.tolerance = n * tol;
  r.pass = r.sum <= r.tolerance;
  return r;
}

}  // namespace martin_games
