#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/history.hpp"

namespace martin_games {

inline constexpr std::size_t kDefaultTreeCap = 200000;

// All positive-probability extensions of a root history up to an absolute
// stage, stored breadth first. Within a stage nodes are in lexicographic
// order of (profile, next state), and each node's children are contiguous,
// grouped by profile. The game must outlive the tree.
class HistoryTree {
 public:
  HistoryTree(const Game& game, const History& root, int max_stage,
              std::size_t cap = kDefaultTreeCap);

  const Game& game() const { return *game_; }
  int size() const { return static_cast<int>(stage_.size()); }
  int max_stage() const { return max_stage_; }
  int root_stage() const { return stage_[0]; }
  const History& root_history() const { return root_; }

  int stage(int v) const { return stage_[v]; }
  StateId state(int v) const { return state_[v]; }
  int parent(int v) const { return parent_[v]; }
  // Profile played at the parent to reach v (-1 for the root).
  ProfileIndex profile(int v) const { return profile_[v]; }
  // Transition probability from the parent to v.
  double step_probability(int v) const { return step_[v]; }
  bool is_leaf(int v) const { return stage_[v] == max_stage_; }

  // Children of v reached by profile a occupy [child_begin(v,a), child_begin(v,a+1)).
  int child_begin(int v, ProfileIndex a) const { return offsets_[offset_index(v) + a]; }
  int child_end(int v, ProfileIndex a) const { return offsets_[offset_index(v) + a + 1]; }
  int children_begin(int v) const { return child_begin(v, 0); }
  int children_end(int v) const { return child_end(v, num_profiles_ - 1); }

  // Nodes of absolute stage k occupy [stage_begin(k), stage_end(k)).
  int stage_begin(int k) const { return stage_offsets_[k - root_stage()]; }
  int stage_end(int k) const { return stage_offsets_[k - root_stage() + 1]; }

  History history(int v) const;
  std::string key(int v) const { return game_->history_key(history(v)); }
  // Node of h, or -1 when h is not in the tree.
  int find(const History& h) const;
  // Whether `ancestor` lies on the path from the root to v (v counts).
  bool is_ancestor(int ancestor, int v) const;
  // Ancestor of v at absolute stage k.
  int ancestor_at(int v, int k) const;

 private:
  std::size_t offset_index(int v) const {
    return static_cast<std::size_t>(v) * (num_profiles_ + 1);
  }

  const Game* game_;
  History root_;
  int max_stage_;
  int num_profiles_;
  std::vector<int> stage_;
  std::vector<StateId> state_;
  std::vector<int> parent_;
  std::vector<ProfileIndex> profile_;
  std::vector<double> step_;
  std::vector<int> offsets_;  // per internal node, num_profiles + 1 entries
  std::vector<int> stage_offsets_;
};

// Node of `big` for every node of `sub`; sub's root must be a node of big and
// sub must not go deeper than big.
std::vector<int> embed_subtree(const HistoryTree& sub, const HistoryTree& big);

// Nodes of the subtree rooted at `root` (root included), breadth first.
std::vector<int> subtree_nodes(const HistoryTree& tree, int root);

// Exactly the positive-probability histories from s1 with stage <= depth, in
// breadth-first lexicographic order.
std::vector<History> histories_up_to(const Game& game, StateId s1, int depth,
                                     std::size_t cap = kDefaultTreeCap);

}  // namespace martin_games
