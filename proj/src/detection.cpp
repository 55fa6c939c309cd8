#include "martin_games/detection.hpp"

#include <algorithm>
#include <cmath>

#include "martin_games/errors.hpp"
#include "martin_games/parallel.hpp"
#include "martin_games/payoff.hpp"
#include "martin_games/rng.hpp"

namespace martin_games {

TargetSet::TargetSet(const Game& game, std::vector<History> members) : members_(std::move(members)) {
  for (const auto& h : members_) keys_.insert(game.history_key(h));
  for (std::size_t a = 0; a < members_.size(); ++a)
    for (std::size_t b = 0; b < members_.size(); ++b) {
      if (a == b) continue;
      if (members_[a].is_prefix_of(members_[b]))
        throw InvalidInputError("target set is not an antichain: " + game.history_key(members_[a]) +
                                " precedes " + game.history_key(members_[b]));
    }
}

std::optional<int> TargetSet::entry_stage(const Game& game, const History& h) const {
  for (const auto& m : members_)
    if (m.is_prefix_of(h)) return m.stage();
  (void)game;
  return std::nullopt;
}

double lambda(const Game& game, const History& h, PlayerId i, ActionId a_i, const TargetSet& q,
              const MixedProfile& x) {
  if (q.empty() || q.has_prefix_in(game, h)) return 0.0;
  // Only members one stage deeper than h and extending it can contribute.
  bool any = false;
  for (const auto& m : q.members())
    if (m.stage() == h.stage() + 1 && h.is_prefix_of(m)) any = true;
  if (!any) return 0.0;
  double total = 0.0;
  for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
    if (game.action_of(a, i) != a_i) continue;
    const double w = others_probability(game, x, a, i);
    if (w == 0.0) continue;
    const auto row = game.transition_row(h.last_state(), a);
    for (StateId s = 0; s < static_cast<StateId>(row.size()); ++s)
      if (row[s] > 0.0 && q.contains(game, h.extended(a, s))) total += w * row[s];
  }
  return total;
}

double zeta(const Game& game, const History& run, PlayerId i, int n, int l, const TargetSet& q,
            const StrategyProfile& profile) {
  if (n < 2) throw InvalidInputError("zeta needs n >= 2");
  l = std::min(l, run.stage());
  double total = 0.0;
  for (int k = n; k <= l; ++k) {
    const History prev = run.prefix(k - 1);
    const ProfileIndex a = run.profiles[k - 2];
    total += lambda(game, prev, i, game.action_of(a, i), q, profile.at(game, prev));
  }
  return total;
}

StopRule never_stop() {
  return [](const History&) { return false; };
}

StopRule stop_at_stage(int k) {
  return [k](const History& h) { return h.stage() >= k; };
}

std::vector<char> mark_members(const HistoryTree& tree, const TargetSet& q) {
  std::vector<char> in_q(tree.size(), 0);
  for (const auto& m : q.members()) {
    const int v = tree.find(m);
    if (v >= 0) in_q[v] = 1;
  }
  return in_q;
}

double lambda_node(const HistoryTree& tree, int v, PlayerId i, ActionId a_i, const std::vector<char>& in_q,
                   bool blocked, const MixedProfile& x) {
  if (blocked || tree.is_leaf(v)) return 0.0;
  const Game& game = tree.game();
  double total = 0.0;
  for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
    if (game.action_of(a, i) != a_i) continue;
    double hit = 0.0;
    for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c)
      if (in_q[c]) hit += tree.step_probability(c);
    if (hit == 0.0) continue;
    total += others_probability(game, x, a, i) * hit;
  }
  return total;
}

ZetaIdentityReport verify_zeta_identity(const Game& game, const StrategyProfile& profile, PlayerId i,
                                        const TargetSet& q, int n, const StopRule& stop, const History& h,
                                        long rollouts, std::uint64_t seed, int stages, double tol) {
  if (n < h.stage() + 1) throw InvalidInputError("zeta identity needs n > stage of the start history");
  // Stopping before the start history ends everything.
  bool stopped_early = false;
  for (int k = 1; k <= h.stage(); ++k)
    if (stop(h.prefix(k))) stopped_early = true;

  ZetaIdentityReport rep;
  rep.tolerance = tol;
  if (rollouts <= 0) {
    const HistoryTree tree = full_tree(game, h);
    const auto policy = profile.materialize(tree);
    const auto in_q = mark_members(tree, q);
    const int size = tree.size();
    std::vector<double> prob(size, 0.0), z(size, 0.0);
    std::vector<char> blocked(size, 0), alive(size, 0), hit(size, 0);
    prob[0] = 1.0;
    // A member before the start history also blocks everything below.
    bool pre_blocked = false;
    for (int k = 1; k < h.stage(); ++k)
      if (q.contains(game, h.prefix(k))) pre_blocked = true;
    blocked[0] = pre_blocked || in_q[0];
    alive[0] = !stopped_early;
    for (int v = 0; v < size; ++v) {
      if (tree.is_leaf(v)) {
        rep.expected_zeta += prob[v] * z[v];
        rep.hit_probability += prob[v] * (hit[v] ? 1.0 : 0.0);
        ++rep.samples;
        continue;
      }
      for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
        const double pa = profile_probability(game, policy[v], a);
        const int k = tree.stage(v) + 1;
        // zeta term for stage k: counted when n <= k <= theta, i.e. theta did not stop by stage k-1.
        const double term = (k >= n && alive[v])
                                 ? lambda_node(tree, v, i, game.action_of(a, i), in_q, blocked[v], policy[v])
                                 : 0.0;
        for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c) {
          prob[c] = prob[v] * pa * tree.step_probability(c);
          z[c] = z[v] + term;
          blocked[c] = blocked[v] || in_q[c];
          hit[c] = hit[v] || (in_q[c] && k >= n && alive[v]);
          alive[c] = alive[v] && !stop(tree.history(c));
        }
      }
    }
    rep.discrepancy = std::abs(rep.expected_zeta - rep.hit_probability);
    rep.pass = rep.discrepancy <= tol;
    return rep;
  }

  rep.statistical = true;
  int last = h.stage() + stages;
  if (game.payoff().finite_horizon() != nullptr) last = std::min(last, full_horizon_stage(game));
  std::vector<double> zs(rollouts), hs(rollouts);
  parallel_for(0, static_cast<std::size_t>(rollouts), [&](std::size_t r) {
    Rng rng = Rng::substream(seed, r);
    History cur = h;
    bool alive = !stopped_early;
    bool blocked = q.has_prefix_in(game, cur);
    double zv = 0.0;
    bool hitv = false;
    while (cur.stage() < last) {
      const MixedProfile x = profile.at(game, cur);
      const ProfileIndex a = sample_profile(game, x, rng);
      const StateId s = sample_state(game, cur.last_state(), a, rng);
      const int k = cur.stage() + 1;
      const bool counted = k >= n && alive;
      if (counted && !blocked) zv += lambda(game, cur, i, game.action_of(a, i), q, x);
      cur = cur.extended(a, s);
      const bool member = !blocked && q.contains(game, cur);
      if (member && counted) hitv = true;
      blocked = blocked || member;
      alive = alive && !stop(cur);
    }
    zs[r] = zv;
    hs[r] = hitv ? 1.0 : 0.0;
  });
  double mz = 0.0, mh = 0.0, md = 0.0;
  for (long r = 0; r < rollouts; ++r) {
    mz += zs[r];
    mh += hs[r];
    md += zs[r] - hs[r];
  }
  mz /= rollouts;
  mh /= rollouts;
  md /= rollouts;
  double var = 0.0;
  for (long r = 0; r < rollouts; ++r) var += std::pow(zs[r] - hs[r] - md, 2);
  var /= std::max(1L, rollouts - 1);
  rep.expected_zeta = mz;
  rep.hit_probability = mh;
  rep.discrepancy = std::abs(md);
  rep.standard_error = std::sqrt(var / rollouts);
  rep.samples = rollouts;
  rep.pass = rep.discrepancy <= 3.0 * rep.standard_error + tol;
  return rep;
}

TargetSet high_minmax_set(const Game& game, const ValueTable& values, const History& h_star,
                          const std::vector<double>& c, double delta, PlayerId i) {
  const HistoryTree& tree = *values.tree;
  const int root = values.node_of(h_star);
  const double threshold = c[i] + 3.0 * delta;
  std::vector<char> covered(tree.size(), 0);
  std::vector<History> members;
  for (int v : subtree_nodes(tree, root)) {
    if (v != root) covered[v] = covered[tree.parent(v)];
    if (covered[v]) continue;
    if (values.vbar(v, i) > threshold) {
      members.push_back(tree.history(v));
      covered[v] = 1;
    }
  }
  // covered marks the member itself too, so descendants are skipped.
  return TargetSet(game, std::move(members));
}

DetectionConfig make_detection_config(double delta, int num_players, std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInputError("delta must lie in (0, 1)");
  DetectionConfig c;
  c.delta = delta;
  c.threshold = std::sqrt(delta);
  c.eta = 2.0 * num_players * std::pow(delta, 0.25);
  c.seed = seed;
  return c;
}

DetectionState start_detection(int num_players, int start_stage, double threshold) {
  DetectionState s;
  s.start_stage = start_stage;
  s.threshold = threshold;
  s.zeta.assign(num_players, 0.0);
  s.nu.assign(num_players, std::nullopt);
  for (auto& nu : s.nu)
    if (0.0 >= threshold) nu = start_stage;
  return s;
}

void observe_stage(DetectionState& state, const Game& game, const History& h, ProfileIndex played,
                   const std::vector<TargetSet>& q, const MixedProfile& x) {
  const int k = h.stage() + 1;
  if (k < state.start_stage) return;
  for (PlayerId i = 0; i < game.num_players(); ++i) {
    state.zeta[i] += lambda(game, h, i, game.action_of(played, i), q[i], x);
    if (!state.nu[i] && state.zeta[i] >= state.threshold) state.nu[i] = k;
  }
}

std::optional<int> nu_stopping(const DetectionState& state, PlayerId i) { return state.nu[i]; }

std::optional<int> ExitSet::theta(int node) const {
  if (node < 0 || node >= static_cast<int>(exit_of.size()) || exit_of[node] < 0) return std::nullopt;
  return tree->stage(exit_of[node]);
}

std::vector<History> ExitSet::histories() const {
  std::vector<History> out;
  for (int v : nodes) out.push_back(tree->history(v));
  return out;
}

std::vector<std::string> ExitSet::keys() const {
  std::vector<std::string> out;
  for (int v : nodes) out.push_back(tree->key(v));
  return out;
}

ExitSet exit_set(std::shared_ptr<const HistoryTree> tree, int root, const std::vector<char>& in_k) {
  ExitSet z;
  z.tree = tree;
  z.root = root;
  const auto sub = subtree_nodes(*tree, root);
  std::vector<char> all_out(tree->size(), 0);
  for (auto it = sub.rbegin(); it != sub.rend(); ++it) {
    const int v = *it;
    if (tree->is_leaf(v)) {
      all_out[v] = !in_k[v];
      continue;
    }
    bool all = true;
    for (int c = tree->children_begin(v); c < tree->children_end(v) && all; ++c) all = all_out[c];
    all_out[v] = all;
  }
  z.in_z.assign(tree->size(), 0);
  z.exit_of.assign(tree->size(), -1);
  for (int v : sub) {
    const bool top = v == root || !all_out[tree->parent(v)];
    if (all_out[v] && top) {
      z.in_z[v] = 1;
      z.nodes.push_back(v);
    }
    if (z.in_z[v])
      z.exit_of[v] = v;
    else if (v != root)
      z.exit_of[v] = z.exit_of[tree->parent(v)];
  }
  z.no_exits = z.nodes.empty();
  return z;
}

std::optional<int> theta_K(const ExitSet& z, const History& h) {
  const HistoryTree& tree = *z.tree;
  const History& root = tree.history(z.root);
  if (!root.is_prefix_of(h)) return std::nullopt;
  const int stage = std::min(h.stage(), tree.max_stage());
  const int v = tree.find(h.prefix(stage));
  if (v < 0) return std::nullopt;
  return z.theta(v);
}

PlayerId BlameFunction::at(const ExitSet& z, int node) const {
  const int e = z.exit_of.at(node);
  if (e < 0) throw InvalidInputError("no exit prefix at node " + z.tree->key(node));
  return blamed[position.at(e)];
}

BlameFunction min_likelihood_blame(const ExitSet& z, const std::vector<MixedProfile>& policy) {
  const HistoryTree& tree = *z.tree;
  const Game& game = tree.game();
  const int n = game.num_players();
  BlameFunction g;
  for (std::size_t e = 0; e < z.nodes.size(); ++e) {
    std::vector<double> like(n, 1.0);
    for (int v = z.nodes[e]; v != z.root; v = tree.parent(v)) {
      const int p = tree.parent(v);
      for (PlayerId j = 0; j < n; ++j) like[j] *= policy[p][j][game.action_of(tree.profile(v), j)];
    }
    const double low = *std::min_element(like.begin(), like.end());
    PlayerId who = -1;
    int ties = 0;
    for (PlayerId j = 0; j < n; ++j)
      if (like[j] <= low + 1e-12) {
        if (who < 0) who = j;
        ++ties;
      }
    g.blamed.push_back(who);
    g.uninformative.push_back(ties > 1);
    g.likelihood.push_back(std::move(like));
    g.position[z.nodes[e]] = static_cast<int>(e);
  }
  return g;
}

std::vector<Deviation> deviation_library(const HistoryTree& tree, const std::vector<MixedProfile>& policy,
                                         PlayerId i) {
  const int k = tree.game().num_actions(i);
  std::vector<Deviation> lib;
  lib.push_back({"follow", [&policy, i](int v) { return policy[v][i]; }});
  for (ActionId b = 0; b < k; ++b)
    lib.push_back({"constant-" + std::to_string(b), [k, b](int) { return pure_action(k, b); }});
  lib.push_back({"uniform", [k](int) { return uniform_action(k); }});
  return lib;
}

BlameErrorReport measure_blame_error(const ExitSet& z, const BlameFunction& g,
                                     const std::vector<MixedProfile>& policy, double eta, long rollouts,
                                     std::uint64_t seed) {
  const HistoryTree& tree = *z.tree;
  const Game& game = tree.game();
  const int n = game.num_players();
  const auto sub = subtree_nodes(tree, z.root);
  BlameErrorReport rep;
  rep.eta = eta;
  rep.statistical = rollouts > 0;
  rep.worst_case.assign(n, 0.0);
  rep.max_rate.assign(n, 0.0);
  if (z.no_exits) {
    for (PlayerId i = 0; i < n; ++i)
      for (const auto& d : deviation_library(tree, policy, i)) rep.rows.push_back({i, d.name, 0.0, 0.0});
    return rep;
  }
  long row_index = 0;
  for (PlayerId i = 0; i < n; ++i) {
    auto wrong = [&](int v) { return g.blamed[g.position.at(v)] != i; };
    for (const auto& d : deviation_library(tree, policy, i)) {
      BlameErrorRow row{i, d.name, 0.0, 0.0};
      auto mixed_at = [&](int v) {
        MixedProfile x = policy[v];
        x[i] = d.play(v);
        return x;
      };
      if (rollouts <= 0) {
        std::vector<double> prob(tree.size(), 0.0);
        prob[z.root] = 1.0;
        for (int v : sub) {
          if (prob[v] == 0.0) continue;
          if (z.in_z[v]) {
            if (wrong(v)) row.rate += prob[v];
            continue;
          }
          if (tree.is_leaf(v)) continue;
          const MixedProfile x = mixed_at(v);
          for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
            const double pa = profile_probability(game, x, a);
            if (pa == 0.0) continue;
            for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c)
              prob[c] += prob[v] * pa * tree.step_probability(c);
          }
        }
      } else {
        std::vector<double> hits(rollouts, 0.0);
        const long base = row_index;
        parallel_for(0, static_cast<std::size_t>(rollouts), [&](std::size_t r) {
          Rng rng = Rng::substream(derive_seed(seed, base), r);
          int v = z.root;
          while (!z.in_z[v] && !tree.is_leaf(v)) {
            const ProfileIndex a = sample_profile(game, mixed_at(v), rng);
            double u = rng.uniform();
            int next = tree.child_end(v, a) - 1;
            for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c) {
              if (u < tree.step_probability(c)) {
                next = c;
                break;
              }
              u -= tree.step_probability(c);
            }
            v = next;
          }
          hits[r] = (z.in_z[v] && wrong(v)) ? 1.0 : 0.0;
        });
        double m = 0.0;
        for (double x : hits) m += x;
        m /= rollouts;
        row.rate = m;
        row.standard_error = std::sqrt(m * (1.0 - m) / rollouts);
      }
      rep.max_rate[i] = std::max(rep.max_rate[i], row.rate);
      rep.rows.push_back(row);
      ++row_index;
    }
    // sup over all strategies of player i: reach-probability DP.
    std::vector<double> best(tree.size(), 0.0);
    for (auto it = sub.rbegin(); it != sub.rend(); ++it) {
      const int v = *it;
      if (z.in_z[v]) {
        best[v] = wrong(v) ? 1.0 : 0.0;
        continue;
      }
      if (tree.is_leaf(v)) continue;
      std::vector<double> by_action(game.num_actions(i), 0.0);
      for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
        const double w = others_probability(game, policy[v], a, i);
        if (w == 0.0) continue;
        double cont = 0.0;
        for (int c = tree.child_begin(v, a); c < tree.child_end(v, a); ++c)
          cont += tree.step_probability(c) * best[c];
        by_action[game.action_of(a, i)] += w * cont;
      }
      best[v] = *std::max_element(by_action.begin(), by_action.end());
    }
    rep.worst_case[i] = best[z.root];
    if (rep.worst_case[i] > eta + 1e-12) rep.within_eta = false;
  }
  return rep;
}

}  // namespace martin_games
