#include "martin_games/strategy.hpp"

#include <cmath>

#include "martin_games/errors.hpp"

namespace martin_games {

bool is_valid_mixed(const MixedAction& x, double tol) {
  if (x.empty()) return false;
  double sum = 0.0;
  for (double p : x) {
    if (!std::isfinite(p) || p < -tol) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol * std::max<std::size_t>(1, x.size());
}

MixedAction pure_action(int num_actions, ActionId a) {
  MixedAction x(num_actions, 0.0);
  x[a] = 1.0;
  return x;
}

MixedAction uniform_action(int num_actions) {
  return MixedAction(num_actions, 1.0 / num_actions);
}

MixedProfile pure_profile(const Game& game, ProfileIndex a) {
  MixedProfile x;
  for (PlayerId i = 0; i < game.num_players(); ++i)
    x.push_back(pure_action(game.num_actions(i), game.action_of(a, i)));
  return x;
}

double profile_probability(const Game& game, const MixedProfile& x, ProfileIndex a) {
  double p = 1.0;
  for (PlayerId i = 0; i < game.num_players() && p != 0.0; ++i) p *= x[i][game.action_of(a, i)];
  return p;
}

double others_probability(const Game& game, const MixedProfile& x, ProfileIndex a, PlayerId i) {
  double p = 1.0;
  for (PlayerId j = 0; j < game.num_players() && p != 0.0; ++j)
    if (j != i) p *= x[j][game.action_of(a, j)];
  return p;
}

namespace {

int replay_memory(const StrategyProfile::Automaton& m, const History& h) {
  int memory = m.initial_memory;
  History prefix = m.anchor;
  for (int k = m.anchor.stage(); k < h.stage(); ++k) {
    prefix = prefix.extended(h.profiles[k - 1], h.states[k]);
    memory = m.update(memory, prefix);
  }
  return memory;
}

}  // namespace

MixedProfile StrategyProfile::at(const Game& game, const History& h) const {
  if (const auto* s = std::get_if<Stationary>(&kind_)) {
    if (h.last_state() >= static_cast<int>(s->by_state.size()))
      throw IncompleteStrategyError(game.history_key(h));
    return s->by_state[h.last_state()];
  }
  if (const auto* t = std::get_if<Tabular>(&kind_)) {
    const int v = t->tree ? t->tree->find(h) : -1;
    if (v < 0 || t->table[v].empty()) throw IncompleteStrategyError(game.history_key(h));
    return t->table[v];
  }
  const auto& m = std::get<Automaton>(kind_);
  if (!m.anchor.is_prefix_of(h)) throw IncompleteStrategyError(game.history_key(h));
  return m.output(replay_memory(m, h), h);
}

std::vector<MixedProfile> StrategyProfile::materialize(const HistoryTree& tree) const {
  std::vector<MixedProfile> out(tree.size());
  const Game& game = tree.game();
  if (const auto* s = std::get_if<Stationary>(&kind_)) {
    for (int v = 0; v < tree.size(); ++v) {
      if (tree.is_leaf(v)) continue;
      if (tree.state(v) >= static_cast<int>(s->by_state.size()))
        throw IncompleteStrategyError(tree.key(v));
      out[v] = s->by_state[tree.state(v)];
    }
    return out;
  }
  if (const auto* t = std::get_if<Tabular>(&kind_)) {
    if (t->tree.get() == &tree) {
      for (int v = 0; v < tree.size(); ++v) {
        if (tree.is_leaf(v)) continue;
        if (t->table[v].empty()) throw IncompleteStrategyError(tree.key(v));
        out[v] = t->table[v];
      }
      return out;
    }
    // Different tree: walk both in lockstep from the root.
    const int root = t->tree ? t->tree->find(tree.root_history()) : -1;
    if (root < 0) throw IncompleteStrategyError(tree.key(0));
    std::vector<int> match(tree.size(), -1);
    match[0] = root;
    for (int v = 0; v < tree.size(); ++v) {
      if (tree.is_leaf(v)) continue;
      const int u = match[v];
      if (u < 0 || t->tree->is_leaf(u) || t->table[u].empty())
        throw IncompleteStrategyError(tree.key(v));
      out[v] = t->table[u];
      for (int c = tree.children_begin(v); c < tree.children_end(v); ++c) {
        const ProfileIndex a = tree.profile(c);
        for (int d = t->tree->child_begin(u, a); d < t->tree->child_end(u, a); ++d)
          if (t->tree->state(d) == tree.state(c)) {
            match[c] = d;
            break;
          }
      }
    }
    return out;
  }
  const auto& m = std::get<Automaton>(kind_);
  if (!m.anchor.is_prefix_of(tree.root_history())) throw IncompleteStrategyError(tree.key(0));
  std::vector<int> memory(tree.size(), 0);
  memory[0] = replay_memory(m, tree.root_history());
  std::vector<History> hist(tree.size());
  hist[0] = tree.root_history();
  for (int v = 0; v < tree.size(); ++v) {
    if (v > 0) {
      hist[v] = hist[tree.parent(v)].extended(tree.profile(v), tree.state(v));
      memory[v] = m.update(memory[tree.parent(v)], hist[v]);
    }
    if (!tree.is_leaf(v)) out[v] = m.output(memory[v], hist[v]);
    // parents are no longer needed once all children are visited
    if (v > 0 && tree.children_end(tree.parent(v)) == v + 1) hist[tree.parent(v)] = History();
  }
  (void)game;
  return out;
}

}  // namespace martin_games
