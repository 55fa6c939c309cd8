#pragma once

#include <cstddef>
#include <vector>

namespace martin_games {

using PlayerId = int;
using StateId = int;
using ActionId = int;
// Index of a full action profile; lexicographic in action order with player 0
// most significant. Part of the game-file contract.
using ProfileIndex = int;

// A finite history (s^1, a^1, s^2, ..., s^n). stage() == n.
struct History {
  std::vector<StateId> states;
  std::vector<ProfileIndex> profiles;

  History() = default;
  explicit History(StateId initial) : states{initial} {}

  int stage() const { return static_cast<int>(states.size()); }
  StateId first_state() const { return states.front(); }
  StateId last_state() const { return states.back(); }

  History extended(ProfileIndex profile, StateId next) const {
    History h = *this;
    h.profiles.push_back(profile);
    h.states.push_back(next);
    return h;
  }

  // Prefix of stage k (1-based).
  History prefix(int k) const {
    History h;
    h.states.assign(states.begin(), states.begin() + k);
    h.profiles.assign(profiles.begin(), profiles.begin() + (k - 1));
    return h;
  }

  // h ⪯ other.
  bool is_prefix_of(const History& other) const {
    if (stage() > other.stage()) return false;
    for (int k = 0; k < stage(); ++k)
      if (states[k] != other.states[k]) return false;
    for (int k = 0; k + 1 < stage(); ++k)
      if (profiles[k] != other.profiles[k]) return false;
    return true;
  }

  // hh'; requires last_state() == tail.first_state().
  History concat(const History& tail) const;

  friend bool operator==(const History&, const History&) = default;
};

}  // namespace martin_games
