#include "martin_games/martin.hpp"

#include <algorithm>
#include <cmath>

#include "martin_games/errors.hpp"
#include "martin_games/payoff.hpp"

namespace martin_games {

double MartinFunction::at(const History& h, PlayerId i) const {
  const int v = tree ? tree->find(h) : -1;
  if (v < 0) throw IncompleteMartinError(tree ? tree->game().history_key(h) : std::string("?"));
  return at(v, i);
}

MartinFunction martin_finite_horizon(const Game& game, const ValueOptions& options) {
  if (game.payoff().finite_horizon() == nullptr)
    throw InvalidInputError("finite-horizon Martin function needs a finite-horizon payoff");
  return martin_finite_horizon(game, compute_minmax_values(game, 0, options));
}

MartinFunction martin_finite_horizon(const Game& game, const ValueTable& values) {
  if (game.payoff().finite_horizon() == nullptr || !values.has_minmax)
    throw InvalidInputError("finite-horizon Martin function needs finite-horizon minmax values");
  MartinFunction d;
  d.tree = values.tree;
  d.num_players = game.num_players();
  d.values = values.minmax;
  d.epsilon = 0.0;
  d.payoff_class = PayoffClass::kFiniteHorizon;
  d.tolerance = values.tolerance;
  d.depth = values.tree->max_stage();
  return d;
}

MartinFunction martin_discounted(const Game& game, double epsilon, int depth, const ValueOptions& options) {
  const auto* disc = game.payoff().discounted();
  if (disc == nullptr) throw InvalidInputError("discounted Martin function needs a discounted payoff");
  if (!(epsilon > 0.0)) throw InvalidInputError("epsilon must be positive");
  ValueOptions opts = options;
  // Residual r gives |v-hat - v| <= lambda r / (1 - lambda) <= eps / 4.
  opts.tolerance = std::min(options.tolerance, (1 - disc->discount) * epsilon / 4);
  const ValueTable table = compute_minmax_values(game, depth, opts);
  if (table.tolerance > epsilon / 2)
    throw SolverError("value iteration error above eps/2", table.tolerance);
  const int n = game.num_players();
  MartinFunction d;
  d.tree = table.tree;
  d.num_players = n;
  d.epsilon = epsilon;
  d.payoff_class = PayoffClass::kDiscounted;
  d.depth = depth;
  d.state_values = table.state_minmax;
  d.vi_error = table.tolerance;
  // Iteration from below: v - e <= v-hat <= v, so vbar - D lies in [eps/2, eps/2 + e] at the root.
  d.slack_low = epsilon / 2 - d.vi_error;
  d.slack_high = epsilon / 2;
  d.tolerance = 1e-12;
  d.values.resize(table.minmax.size());
  for (int v = 0; v < d.tree->size(); ++v) {
    const History h = d.tree->history(v);
    const auto prefix = payoff_eval(game, h, EvalMode::kTruncated);
    const double weight = std::pow(disc->discount, h.stage() - 1);
    for (PlayerId i = 0; i < n; ++i)
      d.values[static_cast<std::size_t>(v) * n + i] =
          prefix[i] + weight * (d.state_values[static_cast<std::size_t>(d.tree->state(v)) * n + i] - epsilon / 2);
  }
  return d;
}

OneShotTensor build_oneshot(const MartinFunction& d, int node) {
  OneShotTensor t = build_oneshot(*d.tree, node, d.values);
  t.source = "martin";
  return t;
}

OneShotTensor build_oneshot(const Game& game, const MartinFunction& d, const History& h) {
  const int v = d.tree ? d.tree->find(h) : -1;
  if (v < 0 || d.tree->is_leaf(v)) throw IncompleteMartinError(game.history_key(h));
  return build_oneshot(d, v);
}

namespace {

void record(CertificationReport& r, double violation, const HistoryTree& tree, int v, PlayerId i) {
  ++r.checked;
  if (r.witness.empty() || violation > r.worst_violation) {
    r.worst_violation = std::max(r.worst_violation, violation);
    r.witness = tree.key(v);
    r.witness_player = i;
  }
}

}  // namespace

CertificationReport certify_property1(const MartinFunction& d, const ValueTable& values, double epsilon,
                                      double tol) {
  CertificationReport r;
  r.property = 1;
  r.tolerance = tol;
  const HistoryTree& tree = *d.tree;
  const bool same = values.tree.get() == d.tree.get();
  for (int v = 0; v < tree.size(); ++v) {
    const int w = same ? v : values.node_of(tree.history(v));
    for (PlayerId i = 0; i < d.num_players; ++i) {
      const double dv = d.at(v, i);
      const double vbar = values.vbar(w, i);
      const double violation = std::max({0.0, vbar - epsilon - dv, dv - vbar});
      record(r, violation, tree, v, i);
    }
  }
  r.pass = r.worst_violation <= tol;
  return r;
}

CertificationReport certify_property2(const MartinFunction& d, const Game& game, double tol,
                                      const SolverConfig& config) {
  (void)game;
  CertificationReport r;
  r.property = 2;
  r.tolerance = tol;
  const HistoryTree& tree = *d.tree;
  for (int v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    const OneShotTensor t = build_oneshot(d, v);
    for (PlayerId i = 0; i < d.num_players; ++i) {
      const SolveResult s = minmax_vs_independent(t, i, config);
      record(r, std::max(0.0, d.at(v, i) - s.lower), tree, v, i);
    }
  }
  r.pass = r.worst_violation <= tol;
  return r;
}

CertificationReport certify_property3(const MartinFunction& d, const Game& game,
                                      const StrategyProfile& profile, const History& from, double tol,
                                      const SolverConfig& config) {
  CertificationReport r;
  r.property = 3;
  r.tolerance = tol;
  if (game.payoff().finite_horizon() == nullptr) {
    r.statistical = true;
    r.note = "exact global check needs a finite-horizon payoff";
  }
  const HistoryTree& tree = *d.tree;
  const int root = tree.find(from);
  if (root < 0) throw IncompleteMartinError(game.history_key(from));
  const int n = d.num_players;
  const auto policy = profile.materialize(tree);
  std::vector<double> oneshot(static_cast<std::size_t>(tree.size()) * n, 0.0);
  // Local condition.
  CertificationReport local = r;
  for (int v = root; v < tree.size(); ++v) {
    if (tree.is_leaf(v) || !tree.is_ancestor(root, v)) continue;
    const OneShotTensor t = build_oneshot(d, v);
    const auto payoff = expected_payoffs(t, policy[v]);
    for (PlayerId i = 0; i < n; ++i) {
      const double value = minmax_vs_independent(t, i, config).upper;
      oneshot[static_cast<std::size_t>(v) * n + i] = value;
      record(local, std::max(0.0, value - payoff[i]), tree, v, i);
    }
  }
  if (local.worst_violation > tol) {
    local.pass = false;
    local.skipped = true;
    local.note = "local condition fails; global check skipped";
    return local;
  }
  if (r.statistical) {
    r.checked = local.checked;
    return r;
  }
  const auto expected = evaluate_all(tree, policy);
  for (int v = root; v < tree.size(); ++v) {
    if (tree.is_leaf(v) || !tree.is_ancestor(root, v)) continue;
    for (PlayerId i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(v) * n + i;
      record(r, std::max(0.0, oneshot[k] - expected[k]), tree, v, i);
    }
  }
  r.pass = r.worst_violation <= tol;
  return r;
}

}  // namespace martin_games
