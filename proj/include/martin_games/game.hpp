#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "martin_games/history.hpp"

namespace martin_games {

// Payoff = sum of stage rewards over `horizon` action rounds plus a terminal
// payoff at the state of stage horizon+1, or an explicit table over complete
// histories. `prefix`/`offset` are set by subgame views.
struct FiniteHorizon {
  int horizon = 1;
  std::vector<double> rewards;   // [state][profile][player]; empty = all zero
  std::vector<double> terminal;  // [state][player]; empty = all zero
  std::optional<std::map<std::string, std::vector<double>>> table;
  History prefix;                // empty unless this is a subgame view
  std::vector<double> offset;    // accumulated prefix reward per player
  std::optional<std::vector<double>> constant;  // degenerate view past the horizon
};

// (1 - discount) * sum_k discount^(k-1) z(s^k, a^k).
struct Discounted {
  std::vector<double> rewards;  // [state][profile][player]
  double discount = 0.9;
};

// f_i = 1 iff the run visits one of player i's target states.
struct Reachability {
  std::vector<std::vector<StateId>> targets;  // per player
};

// limsup of running averages of z; simulation only.
struct MeanPayoff {
  std::vector<double> rewards;  // [state][profile][player]
};

enum class PayoffClass { kFiniteHorizon, kDiscounted, kReachability, kMeanPayoff };

struct PayoffSpec {
  std::variant<FiniteHorizon, Discounted, Reachability, MeanPayoff> kind;
  bool declared_shift_invariant = false;

  PayoffClass payoff_class() const { return static_cast<PayoffClass>(kind.index()); }
  const FiniteHorizon* finite_horizon() const { return std::get_if<FiniteHorizon>(&kind); }
  const Discounted* discounted() const { return std::get_if<Discounted>(&kind); }
  const Reachability* reachability() const { return std::get_if<Reachability>(&kind); }
  const MeanPayoff* mean_payoff() const { return std::get_if<MeanPayoff>(&kind); }
};

const char* payoff_class_name(PayoffClass c);

// original = offset + scale * normalized, per player.
struct Normalization {
  std::vector<double> offset;
  std::vector<double> scale;

  bool identity() const;
  double denormalize(PlayerId i, double normalized) const { return offset[i] + scale[i] * normalized; }
  double normalize(PlayerId i, double original) const { return (original - offset[i]) / scale[i]; }
};

class Game {
 public:
  // Payoffs are normalized into [0, 1] here; the map is kept in normalization().
  // Only dimensions are checked; semantic problems are reported by validate_game.
  Game(std::vector<std::string> players, std::vector<std::string> states,
       std::vector<std::vector<std::string>> actions, std::vector<double> transitions,
       PayoffSpec payoff, StateId initial_state = 0);

  // Anonymous names ("p0", "s0", "a0", ...).
  static Game make(int players, int states, const std::vector<int>& actions,
                   std::vector<double> transitions, PayoffSpec payoff, StateId initial_state = 0);

  // Same transitions with a payoff that is already normalized (subgame views).
  Game with_normalized_payoff(PayoffSpec payoff, StateId initial_state) const;
  // Reattaches the map to original units of a game saved in normalized units.
  // Throws InvalidInputError unless the payoffs are already in [0, 1].
  Game with_normalization(Normalization map) const;

  int num_players() const { return static_cast<int>(players_.size()); }
  int num_states() const { return static_cast<int>(states_.size()); }
  int num_actions(PlayerId i) const { return static_cast<int>(actions_[i].size()); }
  int num_profiles() const { return num_profiles_; }
  StateId initial_state() const { return initial_state_; }

  const std::vector<std::string>& player_names() const { return players_; }
  const std::vector<std::string>& state_names() const { return states_; }
  const std::vector<std::vector<std::string>>& action_names() const { return actions_; }

  double transition(StateId s, ProfileIndex a, StateId next) const {
    return transitions_[(static_cast<std::size_t>(s) * num_profiles_ + a) * states_.size() + next];
  }
  std::span<const double> transition_row(StateId s, ProfileIndex a) const {
    return {transitions_.data() + (static_cast<std::size_t>(s) * num_profiles_ + a) * states_.size(),
            states_.size()};
  }
  const std::vector<double>& transitions() const { return transitions_; }

  ProfileIndex encode(std::span<const ActionId> actions) const;
  std::vector<ActionId> decode(ProfileIndex a) const;
  ActionId action_of(ProfileIndex a, PlayerId i) const { return (a / strides_[i]) % num_actions(i); }
  int stride(PlayerId i) const { return strides_[i]; }
  // Profile with player i's action replaced.
  ProfileIndex with_action(ProfileIndex a, PlayerId i, ActionId ai) const {
    return a + (ai - action_of(a, i)) * strides_[i];
  }

  const PayoffSpec& payoff() const { return payoff_; }
  PayoffClass payoff_class() const { return payoff_.payoff_class(); }
  const Normalization& normalization() const { return normalization_; }

  // Stage reward z_i(s, a) for reward-based classes (0 otherwise).
  double stage_reward(StateId s, ProfileIndex a, PlayerId i) const;
  // Terminal payoff g_i(s) for FiniteHorizon (0 otherwise).
  double terminal_payoff(StateId s, PlayerId i) const;

  std::string history_key(const History& h) const;
  History parse_history_key(const std::string& key) const;
  std::string profile_string(ProfileIndex a) const;

 private:
  struct Normalized {};
  Game(const Game& base, PayoffSpec payoff, StateId initial_state, Normalized);
  void init_strides();
  void normalize_payoffs();

  std::vector<std::string> players_;
  std::vector<std::string> states_;
  std::vector<std::vector<std::string>> actions_;
  std::vector<double> transitions_;  // [state][profile][next]
  std::vector<int> strides_;
  int num_profiles_ = 1;
  PayoffSpec payoff_;
  Normalization normalization_;
  StateId initial_state_ = 0;
};

struct Violation {
  std::string kind;  // "row sum", "negative probability", "empty action set", ...
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_game(const Game& game);

// Throws InvalidInputError listing the first violations when the game is invalid.
void require_valid(const Game& game);

// Length of the payoff-relevant horizon (horizon+1 stages), or -1 for infinite classes.
int full_horizon_stage(const Game& game);

}  // namespace martin_games
