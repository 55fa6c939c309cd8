#include "martin_games/mediator.hpp"

#include <cmath>
#include <functional>

#include <json.hpp>

#include "martin_games/errors.hpp"

namespace martin_games {

MediatedSystem build_mediated(const Game& game, double epsilon, const SolverConfig& config) {
  if (game.payoff().finite_horizon() == nullptr)
    throw UnsupportedError("the mediated construction is built for finite-horizon payoffs");
  if (!(epsilon > 0.0)) throw InvalidInputError("epsilon must be positive");
  MediatedSystem sys;
  sys.epsilon = epsilon;
  sys.delta = epsilon / 2;
  sys.mediated.game = &game;
  sys.mediated.placeholder = 0;
  ValueOptions options;
  options.solver = config;
  sys.values = compute_minmax_values(game, 0, options);
  sys.martin = martin_finite_horizon(game, sys.values);
  sys.acceptable = acceptable_profile(game, sys.martin, config);
  sys.mediator.tree = sys.values.tree;
  sys.mediator.x = sys.acceptable.profile.tabular().table;
  sys.mediator.delta = sys.delta;
  const HistoryTree& tree = *sys.values.tree;
  const int n = game.num_players();
  sys.punished_value.assign(static_cast<std::size_t>(tree.size()) * n, 0.0);
  for (PlayerId i = 0; i < n; ++i) {
    std::vector<MixedProfile> policy(tree.size());
    for (int v = 0; v < tree.size(); ++v)
      if (!tree.is_leaf(v)) policy[v] = sys.values.minimizers[sys.values.index(v, i)];
    const auto br = best_response_value(tree, policy, i, 0);
    for (int v = 0; v < tree.size(); ++v) sys.punished_value[static_cast<std::size_t>(v) * n + i] = br.node_values[v];
  }
  return sys;
}

namespace {

int node_of(const MediatedSystem& sys, const History& h) {
  const int v = sys.mediator.tree->find(h);
  if (v < 0) throw IncompleteStrategyError(sys.mediated.game->history_key(h));
  return v;
}

}  // namespace

std::vector<Message> mediator_step(const MediatedSystem& sys, const MediatorHistory& h, Rng& rng) {
  const Game& game = *sys.mediated.game;
  const int v = node_of(sys, h.history);
  if (sys.mediator.tree->is_leaf(v)) throw InvalidInputError("no recommendation after the horizon");
  std::vector<Message> out(game.num_players());
  for (PlayerId i = 0; i < game.num_players(); ++i) {
    out[i].previous = h.previous;
    out[i].recommendation = rng.categorical(sys.mediator.x[v][i]);
  }
  return out;
}

std::optional<DeviationRecord> detect_deviation(const Game& game, const History& start,
                                                const std::vector<StageRecord>& record) {
  History h = start;
  for (std::size_t k = 0; k < record.size(); ++k) {
    // Recommendations revealed at the next stage, or the current ones at the end.
    ProfileIndex recommended = 0;
    if (k + 1 < record.size()) {
      recommended = record[k + 1].messages.at(0).previous;
    } else {
      for (PlayerId i = 0; i < game.num_players(); ++i)
        recommended += record[k].messages.at(i).recommendation * game.stride(i);
    }
    const History next = h.extended(record[k].played, record[k].next_state);
    for (PlayerId i = 0; i < game.num_players(); ++i)
      if (game.action_of(record[k].played, i) != game.action_of(recommended, i))
        return DeviationRecord{h.stage(), i, next};
    h = next;
  }
  return std::nullopt;
}

ActionId follow_policy(const MediatedSystem& sys, PlayerId i, const History& h, ActionId recommendation,
                       const DeviationRecord* deviation, Rng& rng) {
  if (deviation == nullptr || deviation->player == i) return recommendation;
  const int v = node_of(sys, h);
  const auto& punish = sys.values.minimizers[sys.values.index(v, deviation->player)];
  return rng.categorical(punish[i]);
}

MediatedRun play_mediated(const MediatedSystem& sys, const History& start, Rng& rng, PlayerId deviator,
                          const MediatedPolicy& policy) {
  const Game& game = *sys.mediated.game;
  const int full = full_horizon_stage(game);
  MediatedRun run;
  run.history = start;
  MediatorHistory mh{start, sys.mediated.placeholder};
  while (run.history.stage() < full) {
    StageRecord stage;
    stage.state = run.history.last_state();
    stage.messages = mediator_step(sys, mh, rng);
    ProfileIndex played = 0, recommended = 0;
    const DeviationRecord* dev = run.deviation ? &*run.deviation : nullptr;
    for (PlayerId i = 0; i < game.num_players(); ++i) {
      const ActionId r = stage.messages[i].recommendation;
      recommended += r * game.stride(i);
      const ActionId a = (i == deviator && policy) ? policy(i, run.history, r, dev)
                                                  : follow_policy(sys, i, run.history, r, dev, rng);
      played += a * game.stride(i);
    }
    stage.played = played;
    stage.next_state = sample_state(game, run.history.last_state(), played, rng);
    run.record.push_back(stage);
    const History next = run.history.extended(played, stage.next_state);
    if (!run.deviation)
      for (PlayerId i = 0; i < game.num_players(); ++i)
        if (game.action_of(played, i) != game.action_of(recommended, i)) {
          run.deviation = DeviationRecord{run.history.stage(), i, next};
          break;
        }
    run.history = next;
    mh = MediatorHistory{next, recommended};
  }
  return run;
}

MonteCarloEstimate simulate_mediated(const MediatedSystem& sys, const History& start, long rollouts,
                                     std::uint64_t seed, PlayerId deviator, const MediatedPolicy& policy) {
  if (rollouts <= 0) throw InvalidInputError("rollouts must be positive");
  const Game& game = *sys.mediated.game;
  const int n = game.num_players();
  MonteCarloEstimate est;
  est.rollouts = rollouts;
  est.truncation_stage = full_horizon_stage(game);
  std::vector<double> sum(n, 0.0), sq(n, 0.0);
  for (long r = 0; r < rollouts; ++r) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
    const MediatedRun run = play_mediated(sys, start, rng, deviator, policy);
    const auto f = payoff_eval(game, run.history, EvalMode::kExact);
    for (PlayerId i = 0; i < n; ++i) {
      sum[i] += f[i];
      sq[i] += f[i] * f[i];
    }
  }
  est.mean.resize(n);
  est.standard_error.resize(n);
  for (PlayerId i = 0; i < n; ++i) {
    est.mean[i] = sum[i] / rollouts;
    const double var = rollouts > 1 ? std::max(0.0, (sq[i] - rollouts * est.mean[i] * est.mean[i]) / (rollouts - 1)) : 0.0;
    est.standard_error[i] = std::sqrt(var / rollouts);
  }
  return est;
}

EnumerationTable mediated_distribution(const MediatedSystem& sys, const History& start) {
  const Game& game = *sys.mediated.game;
  const int full = full_horizon_stage(game);
  const int n = game.num_players();
  EnumerationTable table;
  // Walk over (history, recommendation profile); everybody follows, so the
  // played profile is the recommended one.
  std::function<void(const History&, double)> walk = [&](const History& h, double prob) {
    if (h.stage() >= full) {
      table.rows.push_back({h, prob, payoff_eval(game, h, EvalMode::kExact)});
      return;
    }
    const int v = node_of(sys, h);
    for (ProfileIndex rec = 0; rec < game.num_profiles(); ++rec) {
      double p = 1.0;
      for (PlayerId i = 0; i < n && p != 0.0; ++i) p *= sys.mediator.x[v][i][game.action_of(rec, i)];
      if (p == 0.0) continue;
      for (StateId s = 0; s < game.num_states(); ++s) {
        const double q = game.transition(h.last_state(), rec, s);
        if (q > 0.0) walk(h.extended(rec, s), prob * p * q);
      }
    }
  };
  walk(start, 1.0);
  return table;
}

DeviationGain best_deviation_gain(const MediatedSystem& sys, PlayerId i, double tol) {
  const Game& game = *sys.mediated.game;
  const HistoryTree& tree = *sys.mediator.tree;
  const int n = game.num_players();
  const int k = game.num_actions(i);
  const auto leaves = leaf_payoffs(tree);
  // follow[v]: value at v before i sees its recommendation, nobody has deviated yet.
  std::vector<double> follow(tree.size(), 0.0);
  for (int v = tree.size() - 1; v >= 0; --v) {
    if (tree.is_leaf(v)) {
      follow[v] = leaves[static_cast<std::size_t>(v) * n + i];
      continue;
    }
    const MixedProfile& x = sys.mediator.x[v];
    double total = 0.0;
    for (ActionId r = 0; r < k; ++r) {
      if (x[i][r] == 0.0) continue;
      double best = -1e300;
      for (ActionId b = 0; b < k; ++b) {
        double value = 0.0;
        for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
          if (game.action_of(a, i) != b) continue;
          const double w = others_probability(game, x, a, i);
          if (w == 0.0) continue;
          for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c)
            value += w * tree.step_probability(c) *
                     (b == r ? follow[c] : sys.punished_value[static_cast<std::size_t>(c) * n + i]);
        }
        best = std::max(best, value);
      }
      total += x[i][r] * best;
    }
    follow[v] = total;
  }
  const auto expected = evaluate_all(tree, sys.mediator.x);
  DeviationGain g;
  g.deviation_value = follow[0];
  g.follow_value = expected[i];
  g.gain = g.deviation_value - g.follow_value;
  g.bound = sys.epsilon;
  g.within_bound = g.gain <= sys.epsilon + tol;
  return g;
}

std::string transcript_jsonl(const MediatedSystem& sys, const MediatedRun& run) {
  const Game& game = *sys.mediated.game;
  std::string out;
  int stage = run.history.stage() - static_cast<int>(run.record.size());
  for (const auto& r : run.record) {
    nlohmann::json line;
    line["stage"] = stage++;
    line["state"] = r.state;
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : r.messages) messages.push_back({m.previous, m.recommendation});
    line["messages"] = std::move(messages);
    line["actions"] = game.decode(r.played);
    line["next_state"] = r.next_state;
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace martin_games
