#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/martin.hpp"
#include "martin_games/oracle.hpp"
#include "martin_games/payoff.hpp"
#include "martin_games/rng.hpp"
#include "martin_games/synth.hpp"
#include "martin_games/values.hpp"

namespace martin_games {

// Message to player i: (previous recommendation profile, current recommendation).
struct Message {
  ProfileIndex previous = 0;
  ActionId recommendation = 0;
  bool operator==(const Message&) const = default;
};

struct MediatedGame {
  const Game* game = nullptr;
  ProfileIndex placeholder = 0;  // previous-profile coordinate at stage 1
  long message_count(PlayerId i) const {
    return static_cast<long>(game->num_profiles()) * game->num_actions(i);
  }
};

// mu_i(h~) = point mass on the previous recommendations x x_i(h).
struct MediatorStrategy {
  std::shared_ptr<const HistoryTree> tree;
  std::vector<MixedProfile> x;  // acceptable profile per node
  double delta = 0.0;
};

// Mediator's view: public history plus the last recommendation profile.
struct MediatorHistory {
  History history;
  ProfileIndex previous = 0;
};

struct MediatedSystem {
  MediatedGame mediated;
  MediatorStrategy mediator;
  double epsilon = 0.0;
  double delta = 0.0;
  ValueTable values;
  MartinFunction martin;
  AcceptableProfile acceptable;
  // Best-response value of each player against the punishers, [node * n + i].
  std::vector<double> punished_value;
};

// delta = eps/2; sigma* from the finite-horizon Martin function; punishers are the
// backward-induction minimizers, anchored one stage after the deviation.
MediatedSystem build_mediated(const Game& game, double epsilon, const SolverConfig& config = {});

std::vector<Message> mediator_step(const MediatedSystem& system, const MediatorHistory& h, Rng& rng);

struct StageRecord {
  StateId state = 0;
  std::vector<Message> messages;
  ProfileIndex played = 0;
  StateId next_state = 0;
};

struct DeviationRecord {
  int stage = 0;      // k*
  PlayerId player = 0;  // i*, smallest index among the deviators at k*
  History after;      // h*, one stage after the deviation
};

// First stage whose played profile differs from the recommendations (revealed
// as the previous-profile coordinate of the next messages, or the current
// recommendations on the final stage).
std::optional<DeviationRecord> detect_deviation(const Game& game, const History& start,
                                                const std::vector<StageRecord>& record);

// Player behavior in the mediated game: action given (player, public history,
// current recommendation, detected deviation if any).
using MediatedPolicy =
    std::function<ActionId(PlayerId i, const History& h, ActionId recommendation, const DeviationRecord* deviation)>;

// tau*: follow recommendations; after a detected deviation by j, players other
// than j play the minimizers against j and j keeps following its recommendations.
ActionId follow_policy(const MediatedSystem& system, PlayerId i, const History& h, ActionId recommendation,
                       const DeviationRecord* deviation, Rng& rng);

struct MediatedRun {
  History history;
  std::vector<StageRecord> record;
  std::optional<DeviationRecord> deviation;
};

// One rollout. `deviator` (optional) replaces tau* for one player.
MediatedRun play_mediated(const MediatedSystem& system, const History& start, Rng& rng,
                          PlayerId deviator = -1, const MediatedPolicy& policy = nullptr);

// Seeded Monte Carlo estimate of the payoffs; rollouts must be positive.
MonteCarloEstimate simulate_mediated(const MediatedSystem& system, const History& start, long rollouts,
                                     std::uint64_t seed, PlayerId deviator = -1,
                                     const MediatedPolicy& policy = nullptr);

// Exact distribution of complete histories when everybody follows.
EnumerationTable mediated_distribution(const MediatedSystem& system, const History& start);

struct DeviationGain {
  double gain = 0.0;
  double follow_value = 0.0;     // E[f_i] under tau*
  double deviation_value = 0.0;  // best value over all deviation strategies
  double bound = 0.0;            // eps
  bool within_bound = false;
};

// Exact best deviation of player i by DP over (public history, own recommendation).
DeviationGain best_deviation_gain(const MediatedSystem& system, PlayerId i, double tol = 1e-9);

// JSON-lines transcript: one object per stage.
std::string transcript_jsonl(const MediatedSystem& system, const MediatedRun& run);

}  // namespace martin_games
