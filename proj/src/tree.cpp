#include "martin_games/tree.hpp"

#include "martin_games/errors.hpp"

namespace martin_games {

HistoryTree::HistoryTree(const Game& game, const History& root, int max_stage, std::size_t cap)
    : game_(&game), root_(root), max_stage_(max_stage), num_profiles_(game.num_profiles()) {
  if (root.states.empty()) throw InvalidInputError("tree root must be a nonempty history");
  if (max_stage < root.stage()) max_stage_ = root.stage();
  stage_.push_back(root.stage());
  state_.push_back(root.last_state());
  parent_.push_back(-1);
  profile_.push_back(-1);
  step_.push_back(1.0);
  stage_offsets_ = {0, 1};

  const int num_states = game.num_states();
  for (int k = root.stage(); k < max_stage_; ++k) {
    const int begin = stage_offsets_[k - root.stage()];
    const int end = stage_offsets_[k - root.stage() + 1];
    for (int v = begin; v < end; ++v) {
      // offsets_ is indexed by node; stage k nodes are all internal here
      offsets_.resize(offset_index(v + 1), 0);
      for (ProfileIndex a = 0; a < num_profiles_; ++a) {
        offsets_[offset_index(v) + a] = size();
        for (StateId t = 0; t < num_states; ++t) {
          const double p = game.transition(state_[v], a, t);
          if (p <= 0.0) continue;
          stage_.push_back(k + 1);
          state_.push_back(t);
          parent_.push_back(v);
          profile_.push_back(a);
          step_.push_back(p);
        }
      }
      offsets_[offset_index(v) + num_profiles_] = size();
      if (stage_.size() > cap)
        throw CapExceededError("history tree exceeds cap of " + std::to_string(cap) +
                                   " nodes (at least " + std::to_string(stage_.size()) + ")",
                               static_cast<double>(stage_.size()));
    }
    stage_offsets_.push_back(size());
  }
  // Leaves get empty child ranges so child_begin/child_end stay valid.
  const int internal = static_cast<int>(offsets_.size() / (num_profiles_ + 1));
  offsets_.resize(offset_index(size()), 0);
  for (int v = internal; v < size(); ++v)
    for (int a = 0; a <= num_profiles_; ++a) offsets_[offset_index(v) + a] = size();
}

History HistoryTree::history(int v) const {
  std::vector<int> path;
  for (int u = v; u > 0; u = parent_[u]) path.push_back(u);
  History h = root_;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    h.profiles.push_back(profile_[*it]);
    h.states.push_back(state_[*it]);
  }
  return h;
}

int HistoryTree::find(const History& h) const {
  if (h.stage() < root_.stage() || h.stage() > max_stage_) return -1;
  if (!root_.is_prefix_of(h)) return -1;
  int v = 0;
  for (int k = root_.stage(); k < h.stage(); ++k) {
    const ProfileIndex a = h.profiles[k - 1];
    const StateId t = h.states[k];
    int next = -1;
    for (int c = child_begin(v, a); c < child_end(v, a); ++c)
      if (state_[c] == t) {
        next = c;
        break;
      }
    if (next < 0) return -1;
    v = next;
  }
  return v;
}

bool HistoryTree::is_ancestor(int ancestor, int v) const {
  while (v >= 0 && stage_[v] > stage_[ancestor]) v = parent_[v];
  return v == ancestor;
}

int HistoryTree::ancestor_at(int v, int k) const {
  while (stage_[v] > k) v = parent_[v];
  return v;
}

std::vector<History> histories_up_to(const Game& game, StateId s1, int depth, std::size_t cap) {
  if (depth < 1) throw InvalidInputError("depth must be positive");
  HistoryTree tree(game, History(s1), depth, cap);
  std::vector<History> out;
  out.reserve(tree.size());
  for (int v = 0; v < tree.size(); ++v) out.push_back(tree.history(v));
  return out;
}

}  // namespace martin_games

namespace martin_games {

std::vector<int> embed_subtree(const HistoryTree& sub, const HistoryTree& big) {
  if (sub.max_stage() > big.max_stage()) throw InvalidInputError("subtree is deeper than the tree");
  std::vector<int> map(sub.size(), -1);
  map[0] = big.find(sub.root_history());
  if (map[0] < 0) throw InvalidInputError("subtree root is not in the tree");
  for (int v = 0; v < sub.size(); ++v) {
    if (sub.is_leaf(v)) continue;
    for (ProfileIndex a = 0; a < sub.game().num_profiles(); ++a)
      for (int c = sub.child_begin(v, a); c < sub.child_end(v, a); ++c)
        map[c] = big.child_begin(map[v], a) + (c - sub.child_begin(v, a));
  }
  return map;
}

std::vector<int> subtree_nodes(const HistoryTree& tree, int root) {
  // Children are contiguous and stages are breadth first, so the descendants
  // at each stage form one contiguous range.
  std::vector<int> out;
  int lo = root, hi = root + 1;
  while (lo < hi) {
    for (int v = lo; v < hi; ++v) out.push_back(v);
    if (tree.is_leaf(lo)) break;
    const int next_lo = tree.children_begin(lo);
    hi = tree.children_end(hi - 1);
    lo = next_lo;
  }
  return out;
}

}  // namespace martin_games
