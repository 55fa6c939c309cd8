#include "martin_games/payoff.hpp"

#include <cmath>

#include "martin_games/errors.hpp"
#include "martin_games/rng.hpp"

namespace martin_games {

namespace {

std::vector<char> reachable_from(const Game& game, StateId from) {
  std::vector<char> seen(game.num_states(), 0);
  std::vector<StateId> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a)
      for (StateId t = 0; t < game.num_states(); ++t)
        if (game.transition(s, a, t) > 0.0 && !seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
  }
  return seen;
}

double offset_of(const FiniteHorizon& fh, PlayerId i) {
  return fh.offset.empty() ? 0.0 : fh.offset[i];
}

// Payoff of a history of stage >= T+1 in view coordinates.
std::vector<double> finite_horizon_payoff(const Game& game, const FiniteHorizon& fh,
                                          const History& run) {
  const int n = game.num_players();
  if (fh.constant) return *fh.constant;
  const History full = run.prefix(fh.horizon + 1);
  if (fh.table) {
    const std::string key = game.history_key(fh.prefix.states.empty() ? full : fh.prefix.concat(full));
    auto it = fh.table->find(key);
    if (it == fh.table->end()) throw IncompleteStrategyError(key);
    return it->second;
  }
  std::vector<double> out(n);
  for (PlayerId i = 0; i < n; ++i) {
    double total = offset_of(fh, i);
    for (int k = 0; k < fh.horizon; ++k) total += game.stage_reward(full.states[k], full.profiles[k], i);
    out[i] = total + game.terminal_payoff(full.last_state(), i);
  }
  return out;
}

}  // namespace

std::vector<double> payoff_eval(const Game& game, const History& run, EvalMode mode) {
  const int n = game.num_players();
  const PayoffSpec& spec = game.payoff();
  if (const auto* fh = spec.finite_horizon()) {
    if (run.stage() >= fh->horizon + 1 || fh->constant) return finite_horizon_payoff(game, *fh, run);
    if (mode == EvalMode::kExact || fh->table)
      throw UnsupportedError("finite-horizon payoff needs a history of stage " +
                             std::to_string(fh->horizon + 1));
    std::vector<double> out(n);
    for (PlayerId i = 0; i < n; ++i) {
      out[i] = offset_of(*fh, i);
      for (int k = 0; k + 1 < run.stage(); ++k) out[i] += game.stage_reward(run.states[k], run.profiles[k], i);
    }
    return out;
  }
  if (const auto* r = spec.reachability()) {
    std::vector<double> out(n, 0.0);
    std::vector<char> reach;
    for (PlayerId i = 0; i < n; ++i) {
      bool hit = false;
      for (StateId s : run.states)
        for (StateId t : r->targets[i]) hit = hit || s == t;
      if (hit) {
        out[i] = 1.0;
        continue;
      }
      if (mode == EvalMode::kTruncated) continue;
      if (reach.empty()) reach = reachable_from(game, run.last_state());
      for (StateId t : r->targets[i])
        if (reach[t])
          throw UnsupportedError("reachability payoff of player " + std::to_string(i) +
                                 " is not determined by " + game.history_key(run));
    }
    return out;
  }
  if (const auto* d = spec.discounted()) {
    if (mode == EvalMode::kExact && d->discount > 0.0)
      throw UnsupportedError("discounted payoff is not determined by a finite prefix");
    std::vector<double> out(n, 0.0);
    for (PlayerId i = 0; i < n; ++i) {
      double weight = 1.0 - d->discount;
      for (int k = 0; k + 1 < run.stage(); ++k) {
        out[i] += weight * game.stage_reward(run.states[k], run.profiles[k], i);
        weight *= d->discount;
      }
    }
    return out;
  }
  if (mode == EvalMode::kExact) throw UnsupportedError("mean payoff has no exact evaluation");
  std::vector<double> out(n, 0.0);
  const int rounds = run.stage() - 1;
  if (rounds == 0) return out;
  for (PlayerId i = 0; i < n; ++i) {
    for (int k = 0; k < rounds; ++k) out[i] += game.stage_reward(run.states[k], run.profiles[k], i);
    out[i] /= rounds;
  }
  return out;
}

std::vector<double> leaf_payoffs(const HistoryTree& tree) {
  const Game& game = tree.game();
  const auto* fh = game.payoff().finite_horizon();
  if (fh == nullptr) throw UnsupportedError("leaf payoffs need a finite-horizon payoff");
  const int n = game.num_players();
  const int full = fh->horizon + 1;
  if (tree.max_stage() < full && !fh->constant)
    throw InvalidInputError("tree stops before the payoff horizon");
  std::vector<double> out(static_cast<std::size_t>(tree.size()) * n, 0.0);
  if (fh->constant || fh->table) {
    for (int v = tree.stage_begin(tree.max_stage()); v < tree.size(); ++v) {
      const auto f = finite_horizon_payoff(game, *fh, tree.history(v));
      for (PlayerId i = 0; i < n; ++i) out[static_cast<std::size_t>(v) * n + i] = f[i];
    }
    return out;
  }
  // Accumulate stage rewards down the tree.
  std::vector<double> acc(static_cast<std::size_t>(tree.size()) * n, 0.0);
  const History& root = tree.root_history();
  for (PlayerId i = 0; i < n; ++i) {
    double total = offset_of(*fh, i);
    for (int k = 0; k + 1 < root.stage() && k < fh->horizon; ++k)
      total += game.stage_reward(root.states[k], root.profiles[k], i);
    acc[i] = total;
  }
  for (int v = 1; v < tree.size(); ++v) {
    const int u = tree.parent(v);
    const bool counts = tree.stage(u) <= fh->horizon;
    for (PlayerId i = 0; i < n; ++i)
      acc[static_cast<std::size_t>(v) * n + i] =
          acc[static_cast<std::size_t>(u) * n + i] +
          (counts ? game.stage_reward(tree.state(u), tree.profile(v), i) : 0.0);
  }
  for (int v = tree.stage_begin(tree.max_stage()); v < tree.size(); ++v) {
    const StateId last = tree.root_stage() > full ? root.states[full - 1]
                                                  : tree.state(tree.ancestor_at(v, full));
    for (PlayerId i = 0; i < n; ++i)
      out[static_cast<std::size_t>(v) * n + i] =
          acc[static_cast<std::size_t>(v) * n + i] + game.terminal_payoff(last, i);
  }
  return out;
}

HistoryTree full_tree(const Game& game, const History& root, std::size_t cap) {
  const auto* fh = game.payoff().finite_horizon();
  if (fh == nullptr) throw UnsupportedError("full tree needs a finite-horizon payoff");
  return HistoryTree(game, root, std::max(fh->horizon + 1, root.stage()), cap);
}

HistoryTree full_tree(const Game& game, std::size_t cap) {
  return full_tree(game, History(game.initial_state()), cap);
}

std::vector<double> evaluate_all(const HistoryTree& tree, const std::vector<MixedProfile>& policy) {
  const Game& game = tree.game();
  const int n = game.num_players();
  std::vector<double> value = leaf_payoffs(tree);
  for (int v = tree.size() - 1; v >= 0; --v) {
    if (tree.is_leaf(v)) continue;
    double* out = &value[static_cast<std::size_t>(v) * n];
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      const double pa = profile_probability(game, policy[v], a);
      if (pa == 0.0) continue;
      for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c) {
        const double w = pa * tree.step_probability(c);
        for (PlayerId i = 0; i < n; ++i) out[i] += w * value[static_cast<std::size_t>(c) * n + i];
      }
    }
  }
  return value;
}

std::vector<double> expected_payoff(const Game& game, const StrategyProfile& profile,
                                    const History& h) {
  if (game.payoff().finite_horizon() == nullptr)
    throw UnsupportedError("exact expected payoff needs a finite-horizon payoff; use Monte Carlo");
  const HistoryTree tree = full_tree(game, h);
  const auto values = evaluate_all(tree, profile.materialize(tree));
  return {values.begin(), values.begin() + game.num_players()};
}

ProfileIndex sample_profile(const Game& game, const MixedProfile& x, Rng& rng) {
  ProfileIndex a = 0;
  for (PlayerId i = 0; i < game.num_players(); ++i) a += rng.categorical(x[i]) * game.stride(i);
  return a;
}

StateId sample_state(const Game& game, StateId s, ProfileIndex a, Rng& rng) {
  return rng.categorical(game.transition_row(s, a));
}

History sample_run(const Game& game, const StrategyProfile& profile, const History& h, int stages,
                   std::uint64_t seed) {
  Rng rng(seed);
  History run = h;
  for (int k = 0; k < stages; ++k) {
    const ProfileIndex a = sample_profile(game, profile.at(game, run), rng);
    run = run.extended(a, sample_state(game, run.last_state(), a, rng));
  }
  return run;
}

MonteCarloEstimate expected_payoff_mc(const Game& game, const StrategyProfile& profile,
                                      const History& h, long rollouts, std::uint64_t seed,
                                      int stages) {
  if (rollouts <= 0) throw InvalidInputError("rollout count must be positive");
  const int n = game.num_players();
  MonteCarloEstimate est;
  est.rollouts = rollouts;
  int extra = stages;
  EvalMode mode = EvalMode::kTruncated;
  if (const auto* fh = game.payoff().finite_horizon()) {
    extra = std::max(0, fh->horizon + 1 - h.stage());
    mode = EvalMode::kExact;
  }
  est.truncation_stage = h.stage() + extra;
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  for (long r = 0; r < rollouts; ++r) {
    const History run = sample_run(game, profile, h, extra, derive_seed(seed, r));
    const auto f = payoff_eval(game, run, mode);
    for (PlayerId i = 0; i < n; ++i) {
      sum[i] += f[i];
      sum_sq[i] += f[i] * f[i];
    }
  }
  est.mean.resize(n);
  est.standard_error.resize(n);
  for (PlayerId i = 0; i < n; ++i) {
    const double mean = sum[i] / rollouts;
    const double var = rollouts > 1 ? std::max(0.0, (sum_sq[i] - rollouts * mean * mean) / (rollouts - 1)) : 0.0;
    est.mean[i] = mean;
    est.standard_error[i] = std::sqrt(var / rollouts);
  }
  return est;
}

Game subgame_view(const Game& game, const History& h) {
  const PayoffSpec& spec = game.payoff();
  if (const auto* fh = spec.finite_horizon()) {
    PayoffSpec view = spec;
    auto& out = std::get<FiniteHorizon>(view.kind);
    if (h.stage() > fh->horizon + 1) {
      out.constant = finite_horizon_payoff(game, *fh, h);
      out.horizon = 0;
      out.table.reset();
      out.prefix = fh->prefix.states.empty() ? h : fh->prefix.concat(h);
      return game.with_normalized_payoff(std::move(view), h.last_state());
    }
    out.horizon = fh->horizon - (h.stage() - 1);
    out.prefix = fh->prefix.states.empty() ? h : fh->prefix.concat(h);
    out.offset.assign(game.num_players(), 0.0);
    for (PlayerId i = 0; i < game.num_players(); ++i) {
      out.offset[i] = offset_of(*fh, i);
      for (int k = 0; k + 1 < h.stage(); ++k) out.offset[i] += game.stage_reward(h.states[k], h.profiles[k], i);
    }
    return game.with_normalized_payoff(std::move(view), h.last_state());
  }
  if (const auto* r = spec.reachability()) {
    for (std::size_t i = 0; i < r->targets.size(); ++i)
      for (StateId s : h.states)
        for (StateId t : r->targets[i])
          if (s == t) throw UnsupportedError("reachability view after a target was hit");
    return game.with_normalized_payoff(spec, h.last_state());
  }
  throw UnsupportedError(std::string("subgame view of ") + payoff_class_name(spec.payoff_class()) +
                         " payoff");
}

bool is_degenerate_view(const Game& game) {
  const auto* fh = game.payoff().finite_horizon();
  return fh != nullptr && fh->constant.has_value();
}

}  // namespace martin_games
