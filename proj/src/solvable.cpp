#include "martin_games/solvable.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "martin_games/errors.hpp"
#include "martin_games/oracle.hpp"
#include "martin_games/payoff.hpp"
#include "martin_games/rng.hpp"

namespace martin_games {

bool delta_condition(double delta, double epsilon, int num_players) {
  return 5.0 * delta + 4.0 * (num_players + 1) * std::pow(delta, 0.25) < epsilon;
}

double choose_delta(double epsilon, int num_players) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidInputError("epsilon must lie in (0, 1]");
  double delta = 0.5;
  for (int k = 1; k < 1000; ++k, delta *= 0.5)
    if (delta_condition(delta, epsilon, num_players)) return delta;
  throw SolverError("no admissible delta on the power-of-two grid");
}

Processes compute_processes(const MartinFunction& d, const StrategyProfile& sigma_star) {
  const HistoryTree& tree = *d.tree;
  const Game& game = tree.game();
  const int n = game.num_players();
  Processes p;
  p.tree = d.tree;
  p.num_players = n;
  p.policy = sigma_star.materialize(tree);
  p.m = evaluate_all(tree, p.policy);
  p.y = d.values;
  p.w = d.values;
  p.reach.assign(tree.size(), 0.0);
  p.reach[0] = 1.0;
  for (int v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    std::vector<double> acc(n, 0.0);
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      const double pa = profile_probability(game, p.policy[v], a);
      for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c) {
        const double w = pa * tree.step_probability(c);
        p.reach[c] = p.reach[v] * w;
        for (PlayerId i = 0; i < n; ++i) acc[i] += w * d.at(c, i);
      }
    }
    for (PlayerId i = 0; i < n; ++i) p.w[static_cast<std::size_t>(v) * n + i] = acc[i];
  }
  return p;
}

SubmartingaleReport verify_submartingale(const Processes& p, double tol) {
  SubmartingaleReport r;
  const HistoryTree& tree = *p.tree;
  for (int v = 0; v < tree.size(); ++v)
    for (PlayerId i = 0; i < p.num_players; ++i) {
      ++r.checked;
      const double gap = p.at(p.y, v, i) - p.at(p.w, v, i);
      if (gap > r.worst) {
        r.worst = gap;
        r.witness = tree.key(v);
        r.witness_player = i;
      }
    }
  r.pass = r.worst <= tol;
  return r;
}

namespace {

// Smallest stage from which the sup-norm condition holds along the path of each leaf.
struct LeafStages {
  std::vector<int> leaves;
  std::vector<int> first1, first2, first3;
};

LeafStages leaf_stages(const Processes& p, double delta) {
  const HistoryTree& tree = *p.tree;
  const int n = p.num_players;
  LeafStages out;
  const int top = tree.max_stage();
  for (int v = tree.stage_begin(top); v < tree.stage_end(top); ++v) out.leaves.push_back(v);
  for (int leaf : out.leaves) {
    // f(r) against m(r^k): upward while close.
    int f1 = top;
    for (int v = leaf; v != 0;) {
      const int u = tree.parent(v);
      bool ok = true;
      for (PlayerId i = 0; i < n; ++i)
        if (std::abs(p.at(p.m, leaf, i) - p.at(p.m, u, i)) > delta) ok = false;
      if (!ok) break;
      f1 = tree.stage(u);
      v = u;
    }
    auto range_first = [&](const std::vector<double>& table) {
      std::vector<double> lo(n), hi(n);
      for (PlayerId i = 0; i < n; ++i) lo[i] = hi[i] = p.at(table, leaf, i);
      int first = top;
      for (int v = leaf; v != 0;) {
        const int u = tree.parent(v);
        bool ok = true;
        for (PlayerId i = 0; i < n; ++i) {
          const double x = p.at(table, u, i);
          if (std::max(hi[i], x) - std::min(lo[i], x) > delta) ok = false;
        }
        if (!ok) break;
        for (PlayerId i = 0; i < n; ++i) {
          lo[i] = std::min(lo[i], p.at(table, u, i));
          hi[i] = std::max(hi[i], p.at(table, u, i));
        }
        first = tree.stage(u);
        v = u;
      }
      return first;
    };
    out.first1.push_back(f1);
    out.first2.push_back(range_first(p.y));
    out.first3.push_back(range_first(p.w));
  }
  return out;
}

// Smallest stage n with P(first <= n) > constant, and that probability.
std::pair<int, double> smallest_stage(const Processes& p, const LeafStages& ls, const std::vector<int>& first,
                                      double constant) {
  const HistoryTree& tree = *p.tree;
  for (int s = tree.root_stage(); s <= tree.max_stage(); ++s) {
    double prob = 0.0;
    for (std::size_t k = 0; k < ls.leaves.size(); ++k)
      if (first[k] <= s) prob += p.reach[ls.leaves[k]];
    if (prob > constant) return {s, prob};
  }
  throw SolverError("no stage satisfies the convergence threshold");
}

}  // namespace

TargetHistory find_target_history(const Processes& p, double delta, double constant) {
  const HistoryTree& tree = *p.tree;
  const Game& game = tree.game();
  const int n = p.num_players;
  const LeafStages ls = leaf_stages(p, delta);
  TargetHistory t;
  t.constant = constant;
  std::tie(t.n1, t.p1) = smallest_stage(p, ls, ls.first1, constant);
  std::tie(t.n2, t.p2) = smallest_stage(p, ls, ls.first2, constant);
  std::tie(t.n3, t.p3) = smallest_stage(p, ls, ls.first3, constant);
  t.n0 = std::max({t.n1, t.n2, t.n3});
  t.in_r0.assign(tree.size(), 0);
  for (std::size_t k = 0; k < ls.leaves.size(); ++k)
    if (std::max({ls.first1[k], ls.first2[k], ls.first3[k]}) <= t.n0) {
      t.in_r0[ls.leaves[k]] = 1;
      t.p_r0 += p.reach[ls.leaves[k]];
    }
  // P_{h,sigma*}(R-hat_{n0}) at every node.
  std::vector<double> cond(tree.size(), 0.0);
  for (int v = tree.size() - 1; v >= 0; --v) {
    if (tree.is_leaf(v)) {
      cond[v] = t.in_r0[v] ? 1.0 : 0.0;
      continue;
    }
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      const double pa = profile_probability(game, p.policy[v], a);
      if (pa == 0.0) continue;
      for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c)
        cond[v] += pa * tree.step_probability(c) * cond[c];
    }
  }
  int best = -1;
  for (int v = tree.stage_begin(t.n0); v < tree.size(); ++v) {
    if (p.reach[v] <= 0.0) continue;
    if (cond[v] > 1.0 - delta) {
      t.node = v;
      t.h_star = tree.history(v);
      t.n_star = tree.stage(v);
      t.p_r0_given_h_star = cond[v];
      t.c.resize(n);
      for (PlayerId i = 0; i < n; ++i) t.c[i] = p.at(p.m, v, i);
      return t;
    }
    if (best < 0 || cond[v] > cond[best]) best = v;
  }
  std::ostringstream msg;
  msg << "no history of stage >= " << t.n0 << " has P(R-hat) > 1 - delta";
  if (best >= 0) msg << "; best candidate " << tree.key(best) << " with " << cond[best];
  throw SolverError(msg.str(), best >= 0 ? cond[best] : 0.0);
}

GoodSet build_good_set(const Game& game, const ValueTable& values, const Processes& p,
                       const TargetHistory& target, double delta, long blame_rollouts, std::uint64_t seed) {
  const HistoryTree& tree = *p.tree;
  if (values.tree.get() != p.tree.get()) throw InvalidInputError("value table and processes use different trees");
  const int n = p.num_players;
  const double root_delta = std::sqrt(delta);
  const int hs = target.node;
  GoodSet g;
  std::vector<std::vector<char>> in_q(n);
  for (PlayerId i = 0; i < n; ++i) {
    g.q.push_back(high_minmax_set(game, values, target.h_star, target.c, delta, i));
    in_q[i] = mark_members(tree, g.q[i]);
  }
  const std::size_t cells = static_cast<std::size_t>(tree.size()) * n;
  g.zeta.assign(cells, 0.0);
  g.nu.assign(cells, 0);
  std::vector<char> blocked(cells, 0);
  const auto sub = subtree_nodes(tree, hs);
  for (PlayerId i = 0; i < n; ++i) {
    const std::size_t at = static_cast<std::size_t>(hs) * n + i;
    // Stage-n* term: reaching h* itself from its parent.
    if (hs != 0) {
      const int par = tree.parent(hs);
      g.zeta[at] = lambda_node(tree, par, i, game.action_of(tree.profile(hs), i), in_q[i], false, p.policy[par]);
    }
    blocked[at] = in_q[i][hs];
    if (g.zeta[at] >= root_delta) g.nu[at] = target.n_star;
  }
  for (int v : sub) {
    if (v == hs) continue;
    const int u = tree.parent(v);
    for (PlayerId i = 0; i < n; ++i) {
      const std::size_t at = static_cast<std::size_t>(v) * n + i;
      const std::size_t up = static_cast<std::size_t>(u) * n + i;
      g.zeta[at] = g.zeta[up] + lambda_node(tree, u, i, game.action_of(tree.profile(v), i), in_q[i],
                                            blocked[up], p.policy[u]);
      blocked[at] = blocked[up] || in_q[i][v];
      g.nu[at] = g.nu[up] != 0 ? g.nu[up] : (g.zeta[at] >= root_delta ? tree.stage(v) : 0);
    }
  }
  g.in_r_hat.assign(tree.size(), 0);
  g.in_k.assign(tree.size(), 0);
  for (int v : sub) {
    if (!tree.is_leaf(v)) continue;
    ++g.leaves;
    bool ok = target.in_r0[v];
    for (PlayerId i = 0; i < n && ok; ++i) ok = g.zeta[static_cast<std::size_t>(v) * n + i] < root_delta;
    g.in_r_hat[v] = ok;
    g.in_k[v] = ok;
    if (ok) g.p_k += p.reach[v] / p.reach[hs];
  }
  g.bound = 1.0 - (n + 1) * root_delta;
  if (!(g.p_k > g.bound)) {
    std::ostringstream msg;
    msg << "good set too small: P(K | h*) = " << g.p_k << " <= " << g.bound << " (delta too large for this game)";
    throw SolverError(msg.str(), g.p_k);
  }
  g.z = exit_set(p.tree, hs, g.in_k);
  g.blame = min_likelihood_blame(g.z, p.policy);
  const DetectionConfig cfg = make_detection_config(delta, n, seed);
  g.blame_error = measure_blame_error(g.z, g.blame, p.policy, cfg.eta, blame_rollouts, seed);

  g.subset.assign(cells, 0);
  for (int v : sub) {
    if (!tree.is_leaf(v)) continue;
    for (PlayerId i = 0; i < n; ++i) {
      const std::size_t at = static_cast<std::size_t>(v) * n + i;
      if (g.in_k[v]) {
        g.subset[at] = 1;
        continue;
      }
      const auto theta = g.z.theta(v);
      if (!theta) {
        g.partition_ok = false;
        g.partition_witness = tree.key(v);
        continue;
      }
      if (g.blame.at(g.z, v) != i) {
        g.subset[at] = 2;
        continue;
      }
      const int nu = g.nu[at];
      if (nu == *theta) {
        g.subset[at] = 3;
      } else if (nu == 0 || nu > *theta) {
        g.subset[at] = 4;
      } else {
        // nu fires strictly before the run leaves K: cannot happen when K avoids zeta >= sqrt(delta).
        g.partition_ok = false;
        g.partition_witness = tree.key(v);
      }
    }
  }
  return g;
}

namespace {

struct HatData {
  std::shared_ptr<const HistoryTree> tree;
  std::vector<MixedProfile> policy;
  std::vector<char> in_z;
  std::vector<PlayerId> blamed;  // per node, -1 outside Z
  std::vector<MixedProfile> minimizers;
  int n = 0;
};

}  // namespace

SigmaHat assemble_sigma_hat(const Game& game, const ValueTable& values, const Processes& p,
                            const TargetHistory& target, const GoodSet& good, double delta) {
  const HistoryTree& tree = *p.tree;
  const int n = p.num_players;
  auto data = std::make_shared<HatData>();
  data->tree = p.tree;
  data->policy = p.policy;
  data->in_z = good.z.in_z;
  data->blamed.assign(tree.size(), -1);
  for (std::size_t e = 0; e < good.z.nodes.size(); ++e) data->blamed[good.z.nodes[e]] = good.blame.blamed[e];
  data->minimizers = values.minimizers;
  data->n = n;

  SigmaHat out;
  out.memory_states = 1 + n;
  for (std::size_t e = 0; e < good.z.nodes.size(); ++e) {
    const int v = good.z.nodes[e];
    out.plans.push_back(punishment_profile(game, values, good.blame.blamed[e], tree.history(v), delta));
    if (!out.plans.back().holds()) out.plans_hold = false;
  }

  StrategyProfile::Automaton m;
  m.anchor = target.h_star;
  m.num_memory_states = 1 + n;
  m.initial_memory = good.z.in_z[target.node] ? 1 + data->blamed[target.node] : 0;
  m.update = [data](int memory, const History& h) {
    if (memory != 0) return memory;
    const int v = data->tree->find(h);
    if (v >= 0 && data->in_z[v]) return 1 + data->blamed[v];
    return 0;
  };
  m.output = [data](int memory, const History& h) {
    const int v = data->tree->find(h);
    if (v < 0) throw IncompleteStrategyError(data->tree->game().history_key(h));
    if (memory == 0) return data->policy[v];
    // Others punish j; j keeps its sigma* part.
    const PlayerId j = memory - 1;
    MixedProfile x = data->minimizers[static_cast<std::size_t>(v) * data->n + j];
    x[j] = data->policy[v][j];
    return x;
  };
  out.profile = StrategyProfile(std::move(m));
  return out;
}

SolvableReport verify_solvable(const Game& game, const ValueTable& values, const Processes& p,
                               const TargetHistory& target, const GoodSet& good, const SigmaHat& sigma_hat,
                               double epsilon, double delta, double tol) {
  const HistoryTree& big = *p.tree;
  const int n = p.num_players;
  SolvableReport r;
  r.epsilon = epsilon;
  r.delta = delta;
  r.sqrt_delta = std::sqrt(delta);
  r.eta = 2.0 * n * std::pow(delta, 0.25);
  r.final_bound = 5.0 * delta + r.eta + r.sqrt_delta + 2.0 * (n + 1) * r.sqrt_delta;
  r.final_bound_ok = r.final_bound <= epsilon;

  const HistoryTree sub = full_tree(game, target.h_star);
  const auto map = embed_subtree(sub, big);
  const auto policy = sigma_hat.profile.materialize(sub);
  const auto on_path = evaluate_all(sub, policy);
  const auto leaves = leaf_payoffs(sub);

  r.pass = true;
  for (PlayerId i = 0; i < n; ++i) {
    PlayerVerdict pv;
    pv.c = target.c[i];
    pv.on_path = on_path[i];
    pv.on_path_bound = pv.c - 2.0 * (n + 1) * r.sqrt_delta;
    pv.on_path_ok = pv.on_path >= pv.on_path_bound - tol;
    const BestResponse br = best_response_value(sub, policy, i, 0);
    pv.best_value = br.value;
    pv.gain = br.value - on_path[i];
    pv.gain_ok = pv.gain <= epsilon + tol;
    if (!pv.on_path_ok || !pv.gain_ok) {
      r.pass = false;
      if (r.witness.empty())
        r.witness = "player " + std::to_string(i) + (pv.gain_ok ? " on-path payoff" : " gain");
    }

    // Distribution of complete histories under (best reply, sigma-hat_{-i}).
    std::vector<double> prob(sub.size(), 0.0);
    prob[0] = 1.0;
    std::vector<double> pr(5, 0.0), mass(5, 0.0), heaviest(5, -1.0);
    std::vector<int> witness(5, -1);
    for (int v = 0; v < sub.size(); ++v) {
      if (prob[v] == 0.0) continue;
      if (sub.is_leaf(v)) {
        const int k = good.subset[static_cast<std::size_t>(map[v]) * n + i];
        pr[k] += prob[v];
        mass[k] += prob[v] * leaves[static_cast<std::size_t>(v) * n + i];
        if (prob[v] > heaviest[k]) {
          heaviest[k] = prob[v];
          witness[k] = v;
        }
        continue;
      }
      MixedProfile x = policy[v];
      x[i] = pure_action(game.num_actions(i), br.strategy[v]);
      for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
        const double pa = profile_probability(game, x, a);
        if (pa == 0.0) continue;
        for (int c = sub.child_begin(v, a); c < sub.child_end(v, a); ++c)
          prob[c] += prob[v] * pa * sub.step_probability(c);
      }
    }
    const double ci = target.c[i];
    const double bounds_mass[5] = {0.0, pr[1] * (ci + delta), r.eta, pr[3] * (ci + 5.0 * delta) + r.eta,
                                   pr[4] * (ci + 3.0 * delta) + r.sqrt_delta};
    for (int k = 1; k <= 4; ++k) {
      SubsetDiagnostic d;
      d.subset = k;
      d.probability = pr[k];
      d.payoff_mass = mass[k];
      d.bound = bounds_mass[k];
      // E2 is bounded through its probability.
      d.within = (k == 2 ? pr[k] : mass[k]) <= d.bound + tol;
      if (witness[k] >= 0) d.witness = sub.key(witness[k]);
      if (!d.within) r.diagnostics_ok = false;
      pv.subsets.push_back(d);
    }
    if (pr[0] > 0.0) r.diagnostics_ok = false;  // unclassified mass
    r.players.push_back(pv);
  }

  // Instance invariants.
  for (PlayerId i = 0; i < n; ++i) {
    if (target.c[i] < values.vbar(target.node, i) - delta - tol) r.c_above_minmax = false;
    if (std::abs(p.at(p.y, target.node, i) - p.at(p.w, target.node, i)) > 2.0 * delta + tol) r.y_w_close = false;
  }
  for (int v : subtree_nodes(big, target.node)) {
    if (!big.is_leaf(v) || !good.in_k[v]) continue;
    for (int u = v;; u = big.parent(u)) {
      for (PlayerId i = 0; i < n; ++i)
        if (values.vbar(u, i) > target.c[i] + 2.0 * delta + tol) r.k_minmax_low = false;
      if (u == target.node) break;
    }
  }
  return r;
}

SolvablePipeline solve_subgame(const Game& game, double epsilon, const SolvableOptions& options) {
  if (game.payoff().finite_horizon() == nullptr)
    throw UnsupportedError("the solvable-subgame pipeline verifies finite-horizon games only");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidInputError("epsilon must lie in (0, 1]");
  SolvablePipeline out;
  out.epsilon = epsilon;
  const int n = game.num_players();
  out.delta = options.delta ? *options.delta : choose_delta(epsilon, n);
  if (!(out.delta > 0.0 && out.delta < 1.0)) throw InvalidInputError("delta must lie in (0, 1)");
  ValueOptions vo;
  vo.solver = options.solver;
  out.values = compute_values(game, 0, vo);
  out.martin = martin_finite_horizon(game, out.values);
  out.acceptable = acceptable_profile(game, out.martin, options.solver);
  out.processes = compute_processes(out.martin, out.acceptable.profile);
  out.target = find_target_history(out.processes, out.delta, options.constant);
  out.good = build_good_set(game, out.values, out.processes, out.target, out.delta, options.blame_rollouts,
                            options.seed);
  out.sigma_hat = assemble_sigma_hat(game, out.values, out.processes, out.target, out.good, out.delta);
  out.report = verify_solvable(game, out.values, out.processes, out.target, out.good, out.sigma_hat, epsilon,
                               out.delta, options.tol);
  return out;
}

namespace {

bool same_payoff(const std::vector<double>& a, const std::vector<double>& b, double tol, double& worst) {
  bool ok = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    worst = std::max(worst, d);
    if (d > tol) ok = false;
  }
  return ok;
}

}  // namespace

ShiftInvarianceReport check_shift_invariance(const Game& game, int depth, long samples, std::uint64_t seed) {
  ShiftInvarianceReport rep;
  const int n = game.num_players();
  if (game.payoff().discounted() != nullptr) {
    rep.pass = false;
    rep.witness_a = "discounted payoffs depend on the prefix";
    return rep;
  }
  if (game.payoff().finite_horizon() != nullptr) {
    const HistoryTree tree = full_tree(game);
    const auto leaves = leaf_payoffs(tree);
    const int top = std::min(std::max(depth, 1), tree.max_stage());
    for (int k = 2; k <= top; ++k) {
      std::map<StateId, int> reference;
      for (int v = tree.stage_begin(k); v < tree.stage_end(k); ++v) {
        auto [it, fresh] = reference.emplace(tree.state(v), v);
        if (fresh) continue;
        const auto a = subtree_nodes(tree, it->second);
        const auto b = subtree_nodes(tree, v);
        ++rep.pairs;
        for (std::size_t x = 0; x < a.size(); ++x) {
          if (!tree.is_leaf(a[x])) continue;
          const std::vector<double> fa(leaves.begin() + static_cast<long>(a[x]) * n,
                                       leaves.begin() + static_cast<long>(a[x] + 1) * n);
          const std::vector<double> fb(leaves.begin() + static_cast<long>(b[x]) * n,
                                       leaves.begin() + static_cast<long>(b[x] + 1) * n);
          if (!same_payoff(fa, fb, 1e-9, rep.worst) && rep.pass) {
            rep.pass = false;
            rep.witness_a = tree.key(a[x]);
            rep.witness_b = tree.key(b[x]);
          }
        }
      }
    }
    return rep;
  }
  // Infinite classes: truncated comparison of h c and h' c for random continuations c.
  rep.statistical = true;
  const int length = 200;
  const auto hist = histories_up_to(game, game.initial_state(), std::max(depth, 1));
  std::map<std::pair<int, StateId>, History> reference;
  Rng rng(derive_seed(seed, 0x5eed));
  const double tol = game.payoff().mean_payoff() != nullptr ? 2.0 * (depth + 1) / length : 1e-9;
  for (const auto& h : hist) {
    auto [it, fresh] = reference.emplace(std::make_pair(h.stage(), h.last_state()), h);
    if (fresh) continue;
    for (long s = 0; s < samples; ++s) {
      History tail(h.last_state());
      for (int k = 0; k < length; ++k) {
        const ProfileIndex a = rng.below(game.num_profiles());
        tail = tail.extended(a, sample_state(game, tail.last_state(), a, rng));
      }
      ++rep.pairs;
      const auto fa = payoff_eval(game, it->second.concat(tail), EvalMode::kTruncated);
      const auto fb = payoff_eval(game, h.concat(tail), EvalMode::kTruncated);
      if (!same_payoff(fa, fb, tol, rep.worst) && rep.pass) {
        rep.pass = false;
        rep.witness_a = game.history_key(it->second);
        rep.witness_b = game.history_key(h);
      }
    }
  }
  return rep;
}

LiftResult shift_invariant_lift(const Game& game, const TargetHistory& target, const SigmaHat& sigma_hat,
                                int depth, std::uint64_t seed) {
  if (game.payoff().discounted() != nullptr)
    throw InvalidInputError("the discounted payoff is not shift-invariant");
  if (!game.payoff().declared_shift_invariant) throw InvalidInputError("payoff is not declared shift-invariant");
  LiftResult out;
  out.check = check_shift_invariance(game, depth, 64, seed);
  if (!out.check.pass)
    throw InvalidInputError("shift-invariance declaration fails: prefixes " + out.check.witness_a + " and " +
                            out.check.witness_b + " disagree");
  out.initial_state = target.h_star.last_state();
  out.view = std::make_shared<const Game>(subgame_view(game, target.h_star));
  const auto& base = sigma_hat.profile.automaton();
  const History h_star = target.h_star;
  StrategyProfile::Automaton m;
  m.anchor = History(out.initial_state);
  m.num_memory_states = base.num_memory_states;
  m.initial_memory = base.initial_memory;
  m.update = [base, h_star](int memory, const History& h) { return base.update(memory, h_star.concat(h)); };
  m.output = [base, h_star](int memory, const History& h) { return base.output(memory, h_star.concat(h)); };
  out.profile = StrategyProfile(std::move(m));
  return out;
}

}  // namespace martin_games
