#include "martin_games/synth.hpp"

#include <algorithm>
#include <cmath>

#include "martin_games/errors.hpp"
#include "martin_games/oracle.hpp"
#include "martin_games/payoff.hpp"

namespace martin_games {

BehaviorStrategy subgame_maxmin_strategy(const Game& game, PlayerId i, const ValueTable& values) {
  if (!values.has_maxmin) throw InvalidInputError("maxmin strategy needs maxmin values");
  BehaviorStrategy s;
  s.player = i;
  s.tree = values.tree;
  s.table.resize(values.tree->size());
  for (int v = 0; v < values.tree->size(); ++v)
    s.table[v] = values.tree->is_leaf(v) ? MixedAction{} : values.maxmin_strategy[values.index(v, i)];
  (void)game;
  return s;
}

BehaviorStrategy subgame_maxmin_strategy(const Game& game, PlayerId i, const ValueOptions& options) {
  if (game.payoff().finite_horizon() == nullptr)
    throw UnsupportedError("subgame maxmin strategies are synthesized for finite-horizon payoffs");
  return subgame_maxmin_strategy(game, i, compute_maxmin_values(game, 0, options));
}

namespace {

void note(GuaranteeReport& r, double violation, const HistoryTree& tree, int v, PlayerId i) {
  ++r.checked;
  if (r.witness.empty() || violation > r.worst_violation) {
    r.worst_violation = std::max(r.worst_violation, violation);
    r.witness = tree.key(v);
    r.witness_player = i;
  }
}

}  // namespace

GuaranteeReport verify_subgame_maxmin(const Game& game, const BehaviorStrategy& strategy,
                                      const ValueTable& values, double epsilon, double tol) {
  if (game.payoff().finite_horizon() == nullptr)
    throw UnsupportedError("maxmin verification needs a finite-horizon payoff");
  const HistoryTree& tree = *strategy.tree;
  const int n = game.num_players();
  const PlayerId i = strategy.player;
  const auto leaves = leaf_payoffs(tree);
  const bool same = values.tree.get() == strategy.tree.get();
  // Worst case over one opponent controlling all of A_{-i}.
  std::vector<double> worst(tree.size(), 0.0);
  for (int v = tree.size() - 1; v >= 0; --v) {
    if (tree.is_leaf(v)) {
      worst[v] = leaves[static_cast<std::size_t>(v) * n + i];
      continue;
    }
    const MixedAction& x = strategy.at(v);
    double best = 1e300;
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      if (game.action_of(a, i) != 0) continue;
      double total = 0.0;
      for (int b = 0; b < game.num_actions(i); ++b) {
        if (x[b] == 0.0) continue;
        const ProfileIndex ab = game.with_action(a, i, b);
        double cont = 0.0;
        for (int c = tree.child_begin(v, ab); c < tree.child_end(v, ab); ++c)
          cont += tree.step_probability(c) * worst[c];
        total += x[b] * cont;
      }
      best = std::min(best, total);
    }
    worst[v] = best;
  }
  GuaranteeReport r;
  r.epsilon = epsilon;
  r.tolerance = tol;
  for (int v = 0; v < tree.size(); ++v) {
    const int w = same ? v : values.node_of(tree.history(v));
    note(r, std::max(0.0, values.vlow(w, i) - epsilon - worst[v]), tree, v, i);
  }
  r.pass = r.worst_violation <= tol;
  return r;
}

AcceptableProfile acceptable_profile(const Game& game, const MartinFunction& d, const SolverConfig& config) {
  const HistoryTree& tree = *d.tree;
  AcceptableProfile out;
  StrategyProfile::Tabular tab;
  tab.tree = d.tree;
  tab.table.resize(tree.size());
  out.regret.assign(tree.size(), 0.0);
  out.method.assign(tree.size(), "");
  for (int v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    const OneShotTensor t = build_oneshot(d, v);
    SolveResult r;
    try {
      r = nash_equilibrium(t, config);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " (history " + tree.key(v) + ")", e.best_residual);
    }
    tab.table[v] = r.strategies;
    out.regret[v] = std::max(0.0, *std::max_element(r.regret.begin(), r.regret.end()));
    out.max_regret = std::max(out.max_regret, out.regret[v]);
    out.method[v] = r.method;
  }
  (void)game;
  out.profile = StrategyProfile(std::move(tab));
  return out;
}

GuaranteeReport verify_acceptable(const Game& game, const StrategyProfile& profile, const ValueTable& values,
                                  double epsilon, double tol) {
  if (game.payoff().finite_horizon() == nullptr)
    throw UnsupportedError("acceptability is verified exactly for finite-horizon payoffs only");
  const HistoryTree& tree = *values.tree;
  const auto expected = evaluate_all(tree, profile.materialize(tree));
  const int n = game.num_players();
  GuaranteeReport r;
  r.epsilon = epsilon;
  r.tolerance = tol;
  for (int v = 0; v < tree.size(); ++v)
    for (PlayerId i = 0; i < n; ++i)
      note(r, std::max(0.0, values.vbar(v, i) - epsilon - expected[static_cast<std::size_t>(v) * n + i]), tree,
           v, i);
  r.pass = r.worst_violation <= tol;
  return r;
}

ChainReport verify_payoff_chain(const Game& game, const MartinFunction& d, const ValueTable& values,
                                const StrategyProfile& profile, double epsilon, double tol,
                                const SolverConfig& config) {
  const HistoryTree& tree = *d.tree;
  const int n = game.num_players();
  const auto expected = evaluate_all(tree, profile.materialize(tree));
  const bool same = values.tree.get() == d.tree.get();
  ChainReport r;
  for (int v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    const OneShotTensor t = build_oneshot(d, v);
    const int w = same ? v : values.node_of(tree.history(v));
    for (PlayerId i = 0; i < n; ++i) {
      const SolveResult s = minmax_vs_independent(t, i, config);
      const double e = expected[static_cast<std::size_t>(v) * n + i];
      // Each link of the chain, conservative side of the bracket.
      const double gap = std::max({s.upper - e - tol, d.at(v, i) - s.lower - tol,
                                   values.vbar(w, i) - epsilon - d.at(v, i) - tol, 0.0});
      ++r.checked;
      if (gap <= 0.0) ++r.holding;
      if (r.witness.empty() || gap > r.worst_violation) {
        r.worst_violation = std::max(r.worst_violation, gap);
        r.witness = tree.key(v);
        r.witness_player = i;
      }
    }
  }
  r.pass = r.holding == r.checked;
  return r;
}

namespace {

PunishmentPlan finite_horizon_plan(const Game& game, const ValueTable& values, PlayerId i, const History& h,
                                   double delta) {
  const int big = values.node_of(h);
  auto sub = std::make_shared<const HistoryTree>(full_tree(game, h));
  const auto map = embed_subtree(*sub, *values.tree);
  StrategyProfile::Tabular tab;
  tab.tree = sub;
  tab.table.resize(sub->size());
  double width = 0.0;
  for (int v = 0; v < sub->size(); ++v) {
    const int w = map[v];
    width = std::max(width, values.vbar(w, i) - values.vbar_lower(w, i));
    if (sub->is_leaf(v)) continue;
    tab.table[v] = values.minimizers[values.index(w, i)];
  }
  PunishmentPlan plan;
  plan.target = i;
  plan.anchor = h;
  plan.delta = delta;
  plan.widened = width > 1e-9;
  if (plan.widened) plan.delta = delta + width;
  plan.bound = values.vbar(big, i) + plan.delta;
  plan.certified_value = best_response_value(*sub, tab.table, i, 0).value;
  plan.profile = StrategyProfile(std::move(tab));
  return plan;
}

PunishmentPlan reachability_plan(const Game& game, const ValueTable& values, PlayerId i, const History& h,
                                 double delta) {
  const auto* reach = game.payoff().reachability();
  const int n = game.num_players();
  const int ns = game.num_states();
  auto target = [&](StateId s) {
    return std::find(reach->targets[i].begin(), reach->targets[i].end(), s) != reach->targets[i].end();
  };
  StrategyProfile::Stationary st;
  for (StateId s = 0; s < ns; ++s) st.by_state.push_back(values.state_minimizers[static_cast<std::size_t>(s) * n + i]);
  // Best reply of i against the stationary punishers: monotone iteration from 0.
  std::vector<double> v(ns, 0.0);
  for (StateId s = 0; s < ns; ++s) v[s] = target(s) ? 1.0 : 0.0;
  double residual = 1.0;
  int it = 0;
  for (; it < 200000 && (it < 10 * ns || residual > 1e-12); ++it) {
    residual = 0.0;
    std::vector<double> next(ns);
    for (StateId s = 0; s < ns; ++s) {
      if (target(s)) {
        next[s] = 1.0;
        continue;
      }
      std::vector<double> by_action(game.num_actions(i), 0.0);
      for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
        const double w = others_probability(game, st.by_state[s], a, i);
        if (w == 0.0) continue;
        double cont = 0.0;
        for (StateId t = 0; t < ns; ++t) cont += game.transition(s, a, t) * v[t];
        by_action[game.action_of(a, i)] += w * cont;
      }
      next[s] = *std::max_element(by_action.begin(), by_action.end());
      residual = std::max(residual, std::abs(next[s] - v[s]));
    }
    v.swap(next);
  }
  bool hit = false;
  for (StateId s : h.states) hit = hit || target(s);
  PunishmentPlan plan;
  plan.target = i;
  plan.anchor = h;
  plan.delta = delta;
  const double inflation = values.tolerance + residual;
  plan.widened = inflation > 1e-9;
  plan.delta = delta + (plan.widened ? inflation : 0.0);
  plan.bound = (hit ? 1.0 : values.state_minmax[static_cast<std::size_t>(h.last_state()) * n + i]) + plan.delta;
  plan.certified_value = hit ? 1.0 : v[h.last_state()];
  plan.profile = StrategyProfile(std::move(st));
  return plan;
}

}  // namespace

PunishmentPlan punishment_profile(const Game& game, const ValueTable& values, PlayerId i, const History& h,
                                  double delta) {
  if (!values.has_minmax) throw InvalidInputError("punishment needs minmax values");
  if (game.payoff().finite_horizon()) return finite_horizon_plan(game, values, i, h, delta);
  if (game.payoff().reachability()) return reachability_plan(game, values, i, h, delta);
  throw UnsupportedError("punishment plans are built for finite-horizon and reachability payoffs");
}

}  // namespace martin_games
