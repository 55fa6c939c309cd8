#pragma once

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/tree.hpp"

namespace martin_games {

using MixedAction = std::vector<double>;
using MixedProfile = std::vector<MixedAction>;  // one mixed action per player

bool is_valid_mixed(const MixedAction& x, double tol = 1e-12);
MixedAction pure_action(int num_actions, ActionId a);
MixedAction uniform_action(int num_actions);
MixedProfile pure_profile(const Game& game, ProfileIndex a);
// Product probability of profile a.
double profile_probability(const Game& game, const MixedProfile& x, ProfileIndex a);
// Probability of the opponents' part of a (player i's coordinate ignored).
double others_probability(const Game& game, const MixedProfile& x, ProfileIndex a, PlayerId i);

// Behavior strategy profile.
class StrategyProfile {
 public:
  // Mixed profile per node of a shared tree.
  struct Tabular {
    std::shared_ptr<const HistoryTree> tree;
    std::vector<MixedProfile> table;
  };
  struct Stationary {
    std::vector<MixedProfile> by_state;
  };
  // Finite automaton running from `anchor`: the memory state is updated on every
  // observed (profile, next state) and the output depends on (memory, history).
  struct Automaton {
    History anchor;
    int num_memory_states = 1;
    int initial_memory = 0;
    std::function<int(int memory, const History& extended)> update;
    std::function<MixedProfile(int memory, const History& h)> output;
  };

  StrategyProfile() = default;
  explicit StrategyProfile(Tabular t) : kind_(std::move(t)) {}
  explicit StrategyProfile(Stationary s) : kind_(std::move(s)) {}
  explicit StrategyProfile(Automaton a) : kind_(std::move(a)) {}

  bool is_tabular() const { return std::holds_alternative<Tabular>(kind_); }
  bool is_stationary() const { return std::holds_alternative<Stationary>(kind_); }
  bool is_automaton() const { return std::holds_alternative<Automaton>(kind_); }
  const Tabular& tabular() const { return std::get<Tabular>(kind_); }
  const Stationary& stationary() const { return std::get<Stationary>(kind_); }
  const Automaton& automaton() const { return std::get<Automaton>(kind_); }

  // Mixed profile at h; throws IncompleteStrategyError when undefined.
  MixedProfile at(const Game& game, const History& h) const;

  // Mixed profile at every node of the tree (automaton memory is replayed once).
  std::vector<MixedProfile> materialize(const HistoryTree& tree) const;

 private:
  std::variant<Stationary, Tabular, Automaton> kind_;
};

// One player's behavior strategy over a tree.
struct BehaviorStrategy {
  PlayerId player = 0;
  std::shared_ptr<const HistoryTree> tree;
  std::vector<MixedAction> table;  // per node

  const MixedAction& at(int node) const { return table[node]; }
};

}  // namespace martin_games
