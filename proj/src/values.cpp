#include "martin_games/values.hpp"

#include <algorithm>
#include <cmath>

#include "martin_games/errors.hpp"
#include "martin_games/parallel.hpp"
#include "martin_games/payoff.hpp"

namespace martin_games {

int ValueTable::node_of(const History& h) const {
  const int v = tree ? tree->find(h) : -1;
  if (v < 0) throw IncompleteMartinError(tree ? tree->game().history_key(h) : std::string("?"));
  return v;
}

namespace {

struct Which {
  bool minmax;
  bool maxmin;
};

void allocate(ValueTable& t, Which which) {
  const std::size_t size = static_cast<std::size_t>(t.tree->size()) * t.num_players;
  t.has_minmax = which.minmax;
  t.has_maxmin = which.maxmin;
  if (which.minmax) {
    t.minmax.assign(size, 0.0);
    t.minmax_lower.assign(size, 0.0);
    t.minimizers.assign(size, {});
  }
  if (which.maxmin) {
    t.maxmin.assign(size, 0.0);
    t.maxmin_strategy.assign(size, {});
  }
}

ValueTable finite_horizon(const Game& game, const History& root, Which which, const ValueOptions& options) {
  ValueTable t;
  t.num_players = game.num_players();
  t.tree = std::make_shared<const HistoryTree>(full_tree(game, root));
  const HistoryTree& tree = *t.tree;
  const int n = t.num_players;
  allocate(t, which);
  const auto leaves = leaf_payoffs(tree);
  for (int v = tree.stage_begin(tree.max_stage()); v < tree.size(); ++v)
    for (PlayerId i = 0; i < n; ++i) {
      const std::size_t k = t.index(v, i);
      if (which.minmax) t.minmax[k] = t.minmax_lower[k] = leaves[k];
      if (which.maxmin) t.maxmin[k] = leaves[k];
    }
  std::vector<double> widths(tree.size(), 0.0);
  for (int stage = tree.max_stage() - 1; stage >= tree.root_stage(); --stage) {
    const int first = tree.stage_begin(stage), last = tree.stage_end(stage);
    parallel_for(first, last, [&](std::size_t node) {
      const int v = static_cast<int>(node);
      if (which.minmax) {
        OneShotTensor upper = build_oneshot(tree, v, t.minmax);
        bool same = true;
        for (int c = tree.children_begin(v); c < tree.children_end(v) && same; ++c)
          for (PlayerId i = 0; i < n; ++i)
            same = same && t.minmax[t.index(c, i)] == t.minmax_lower[t.index(c, i)];
        const OneShotTensor lower = same ? upper : build_oneshot(tree, v, t.minmax_lower);
        for (PlayerId i = 0; i < n; ++i) {
          const SolveResult r = minmax_vs_independent(upper, i, options.solver);
          t.minmax[t.index(v, i)] = r.upper;
          t.minimizers[t.index(v, i)] = r.strategies;
          const double lo = same ? r.lower : minmax_vs_independent(lower, i, options.solver).lower;
          t.minmax_lower[t.index(v, i)] = std::min(lo, r.upper);
          widths[v] = std::max(widths[v], r.upper - t.minmax_lower[t.index(v, i)]);
        }
      }
      if (which.maxmin) {
        const OneShotTensor tensor = build_oneshot(tree, v, t.maxmin);
        for (PlayerId i = 0; i < n; ++i) {
          const SolveResult r = maxmin_oneshot(tensor, i, options.solver);
          t.maxmin[t.index(v, i)] = r.value;
          t.maxmin_strategy[t.index(v, i)] = r.strategies[i];
        }
      }
    });
  }
  const double width = *std::max_element(widths.begin(), widths.end());
  const int rounds = tree.max_stage() - tree.root_stage();
  t.tolerance = width + 1e-12 * std::max(1, rounds);
  t.certified = width <= options.solver.certification_tolerance;
  return t;
}

// One-shot tensor at state s for the stationary operator.
OneShotTensor state_tensor(const Game& game, StateId s, const std::vector<double>& v) {
  const int n = game.num_players();
  std::vector<int> actions(n);
  for (PlayerId i = 0; i < n; ++i) actions[i] = game.num_actions(i);
  std::vector<double> payoff(static_cast<std::size_t>(game.num_profiles()) * n, 0.0);
  const auto* d = game.payoff().discounted();
  for (ProfileIndex a = 0; a < game.num_profiles(); ++a)
    for (PlayerId i = 0; i < n; ++i) {
      double cont = 0.0;
      for (StateId t = 0; t < game.num_states(); ++t) {
        const double p = game.transition(s, a, t);
        if (p > 0.0) cont += p * v[static_cast<std::size_t>(t) * n + i];
      }
      double& e = payoff[static_cast<std::size_t>(a) * n + i];
      e = d ? (1 - d->discount) * game.stage_reward(s, a, i) + d->discount * cont : cont;
    }
  return make_tensor(std::move(actions), std::move(payoff));
}

bool is_target(const Game& game, StateId s, PlayerId i) {
  const auto* r = game.payoff().reachability();
  if (!r) return false;
  for (StateId t : r->targets[i])
    if (t == s) return true;
  return false;
}

ValueTable stationary(const Game& game, int depth, Which which, const ValueOptions& options) {
  if (depth < 1) throw InvalidInputError("value tables of infinite-horizon payoffs need depth >= 1");
  ValueTable t;
  const int n = game.num_players();
  const int ns = game.num_states();
  t.num_players = n;
  const std::size_t size = static_cast<std::size_t>(ns) * n;
  const bool reach = game.payoff().reachability() != nullptr;
  const int min_sweeps = reach ? 10 * ns : 1;

  // Monotone iteration from 0: targets are pinned at 1 for Reachability.
  auto iterate = [&](bool minmax_side, std::vector<double>& v, std::vector<double>& lower,
                     std::vector<MixedProfile>* minimizers) {
    v.assign(size, 0.0);
    lower.assign(size, 0.0);
    for (StateId s = 0; s < ns; ++s)
      for (PlayerId i = 0; i < n; ++i)
        if (is_target(game, s, i)) v[s * n + i] = lower[s * n + i] = 1.0;
    if (minimizers) minimizers->assign(size, {});
    int it = 0;
    double residual = 0.0;
    bool certified = true;
    for (;;) {
      std::vector<double> next(size), next_lower(size);
      residual = 0.0;
      for (StateId s = 0; s < ns; ++s) {
        const OneShotTensor tensor = state_tensor(game, s, v);
        const OneShotTensor tensor_lower = minmax_side ? state_tensor(game, s, lower) : tensor;
        for (PlayerId i = 0; i < n; ++i) {
          const std::size_t k = static_cast<std::size_t>(s) * n + i;
          if (is_target(game, s, i)) {
            next[k] = next_lower[k] = 1.0;
            if (minimizers) (*minimizers)[k] = minmax_vs_independent(tensor, i, options.solver).strategies;
            continue;
          }
          if (minmax_side) {
            const SolveResult r = minmax_vs_independent(tensor, i, options.solver);
            next[k] = r.upper;
            next_lower[k] = std::min(r.upper, minmax_vs_independent(tensor_lower, i, options.solver).lower);
            if (minimizers) (*minimizers)[k] = r.strategies;
            certified = certified && r.certified;
          } else {
            next[k] = next_lower[k] = maxmin_oneshot(tensor, i, options.solver).value;
          }
          residual = std::max(residual, std::abs(next[k] - v[k]));
        }
      }
      v.swap(next);
      lower.swap(next_lower);
      ++it;
      if ((it >= min_sweeps && residual <= options.tolerance) || it >= options.max_iterations) break;
    }
    if (residual > options.tolerance)
      throw SolverError("stationary iteration did not reach tolerance within budget", residual);
    t.iterations = std::max(t.iterations, it);
    t.residual = std::max(t.residual, residual);
    if (!certified) t.certified = false;
  };

  double error_bound = 0.0;
  if (which.minmax) {
    iterate(true, t.state_minmax, t.state_minmax_lower, &t.state_minimizers);
    t.has_minmax = true;
  }
  if (which.maxmin) {
    std::vector<double> unused;
    iterate(false, t.state_maxmin, unused, nullptr);
    t.has_maxmin = true;
  }
  if (const auto* d = game.payoff().discounted()) {
    // Contraction: distance to the fixed point <= lambda * residual / (1 - lambda).
    error_bound = d->discount * t.residual / (1 - d->discount);
  } else {
    // Monotone from below; the residual after >= 10|S| sweeps is recorded as the tolerance.
    error_bound = t.residual;
  }

  t.tree = std::make_shared<const HistoryTree>(game, History(game.initial_state()), depth);
  const HistoryTree& tree = *t.tree;
  allocate(t, which);
  for (int v = 0; v < tree.size(); ++v) {
    const History h = tree.history(v);
    const StateId s = tree.state(v);
    std::vector<double> prefix(n, 0.0);
    double weight = 1.0;
    std::vector<char> hit(n, 0);
    if (const auto* d = game.payoff().discounted()) {
      prefix = payoff_eval(game, h, EvalMode::kTruncated);
      weight = std::pow(d->discount, h.stage() - 1);
    } else {
      for (StateId q : h.states)
        for (PlayerId i = 0; i < n; ++i) hit[i] = hit[i] || is_target(game, q, i);
    }
    for (PlayerId i = 0; i < n; ++i) {
      const std::size_t k = t.index(v, i);
      const std::size_t sk = static_cast<std::size_t>(s) * n + i;
      auto lift = [&](double x) { return hit[i] ? 1.0 : prefix[i] + weight * x; };
      if (which.minmax) {
        t.minmax[k] = lift(t.state_minmax[sk]);
        t.minmax_lower[k] = lift(t.state_minmax_lower[sk]);
        t.minimizers[k] = t.state_minimizers[sk];
      }
      if (which.maxmin) t.maxmin[k] = lift(t.state_maxmin[sk]);
    }
  }
  double width = 0.0;
  if (which.minmax)
    for (std::size_t k = 0; k < size; ++k) width = std::max(width, t.state_minmax[k] - t.state_minmax_lower[k]);
  t.tolerance = error_bound + width;
  if (width > options.solver.certification_tolerance) t.certified = false;
  if (which.maxmin)
    for (int v = 0; v < tree.size(); ++v) {
      const OneShotTensor tensor = state_tensor(game, tree.state(v), t.state_maxmin);
      for (PlayerId i = 0; i < n; ++i)
        t.maxmin_strategy[t.index(v, i)] = maxmin_oneshot(tensor, i, options.solver).strategies[i];
    }
  return t;
}

ValueTable dispatch(const Game& game, int depth, Which which, const ValueOptions& options) {
  switch (game.payoff_class()) {
    case PayoffClass::kFiniteHorizon:
      return finite_horizon(game, History(game.initial_state()), which, options);
    case PayoffClass::kDiscounted:
    case PayoffClass::kReachability:
      return stationary(game, depth, which, options);
    case PayoffClass::kMeanPayoff:
      break;
  }
  throw UnsupportedError("minmax and maxmin values are not computed for mean payoffs");
}

}  // namespace

ValueTable compute_minmax_values(const Game& game, int depth, const ValueOptions& options) {
  return dispatch(game, depth, {true, false}, options);
}

ValueTable compute_maxmin_values(const Game& game, int depth, const ValueOptions& options) {
  return dispatch(game, depth, {false, true}, options);
}

ValueTable compute_values(const Game& game, int depth, const ValueOptions& options) {
  return dispatch(game, depth, {true, true}, options);
}

ValueTable compute_values(const Game& game, const History& root, const ValueOptions& options) {
  if (game.payoff().finite_horizon() == nullptr)
    throw UnsupportedError("rooted value tables need a finite-horizon payoff");
  return finite_horizon(game, root, {true, true}, options);
}

}  // namespace martin_games
