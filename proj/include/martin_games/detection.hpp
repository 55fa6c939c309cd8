#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "martin_games/game.hpp"
#include "martin_games/strategy.hpp"
#include "martin_games/tree.hpp"
#include "martin_games/values.hpp"

namespace martin_games {

// Finite antichain of histories, keyed by canonical history keys.
class TargetSet {
 public:
  TargetSet() = default;
  // Throws InvalidInputError when one member extends another.
  TargetSet(const Game& game, std::vector<History> members);

  const std::vector<History>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  bool contains(const Game& game, const History& h) const { return keys_.count(game.history_key(h)) > 0; }
  // Stage of the prefix of h (h included) lying in the set, if any.
  std::optional<int> entry_stage(const Game& game, const History& h) const;
  bool has_prefix_in(const Game& game, const History& h) const { return entry_stage(game, h).has_value(); }

 private:
  std::vector<History> members_;
  std::unordered_set<std::string> keys_;
};

// Probability that the next history lies in Q when player i plays a_i at h and
// the others play their parts of x (x = sigma(h)). 0 when a prefix of h is in Q.
double lambda(const Game& game, const History& h, PlayerId i, ActionId a_i, const TargetSet& q,
              const MixedProfile& x);

// Tree forms: membership marks per node, and Lambda at a node where `blocked`
// says whether a prefix of the node (itself included) is in the set.
std::vector<char> mark_members(const HistoryTree& tree, const TargetSet& q);
double lambda_node(const HistoryTree& tree, int v, PlayerId i, ActionId a_i, const std::vector<char>& in_q,
                   bool blocked, const MixedProfile& x);

// zeta_i(r, n, l) = sum_{k=n}^{l} Lambda_i(r^{k-1}, a_i^{k-1}), opponents at profile.
// l is capped at the stage of `run`; 0 when n > l. Requires n >= 2.
double zeta(const Game& game, const History& run, PlayerId i, int n, int l, const TargetSet& q,
            const StrategyProfile& profile);

// Stopping rule as a stage-indexed predicate: theta(r) is the first stage k with
// stop(r^k); infinity when none.
using StopRule = std::function<bool(const History&)>;
StopRule never_stop();
StopRule stop_at_stage(int k);

struct ZetaIdentityReport {
  bool pass = false;
  bool statistical = false;
  double expected_zeta = 0.0;
  double hit_probability = 0.0;
  double discrepancy = 0.0;
  double standard_error = 0.0;  // of the difference, Monte Carlo only
  double tolerance = 0.0;
  long samples = 0;             // full histories (exact) or rollouts
};

// E[zeta_i(r, n, theta(r))] against P(r^k in Q for some n <= k <= theta(r)) from h.
// Exact mode (rollouts == 0) enumerates the finite-horizon tree; Monte Carlo mode
// truncates runs at `stages` and passes within 3 standard errors.
ZetaIdentityReport verify_zeta_identity(const Game& game, const StrategyProfile& profile, PlayerId i,
                                        const TargetSet& q, int n, const StopRule& stop, const History& h,
                                        long rollouts = 0, std::uint64_t seed = 0, int stages = 50,
                                        double tol = 1e-9);

// First histories h >= h* (on the value table's tree) with vbar_i(h) > c_i + 3 delta.
TargetSet high_minmax_set(const Game& game, const ValueTable& values, const History& h_star,
                          const std::vector<double>& c, double delta, PlayerId i);

struct DetectionConfig {
  double delta = 0.0;
  double threshold = 0.0;  // sqrt(delta)
  double eta = 0.0;        // 2 n delta^(1/4)
  std::uint64_t seed = 0;
};

DetectionConfig make_detection_config(double delta, int num_players, std::uint64_t seed = 0);

// Running statistics along one play from stage n*.
struct DetectionState {
  int start_stage = 0;
  double threshold = 0.0;
  std::vector<double> zeta;
  std::vector<std::optional<int>> nu;
  std::optional<int> theta;
  std::optional<PlayerId> blamed;
};

// zeta starts at 0; nu is checked at the start stage already.
DetectionState start_detection(int num_players, int start_stage, double threshold);

// Adds the stage-(h.stage()+1) term of every player's zeta after `played` at h,
// where x = sigma(h) and q[i] is player i's target set.
void observe_stage(DetectionState& state, const Game& game, const History& h, ProfileIndex played,
                   const std::vector<TargetSet>& q, const MixedProfile& x);

std::optional<int> nu_stopping(const DetectionState& state, PlayerId i);

// Exit set of a good set K given as a set of full-horizon leaves below `root`:
// the maximal nodes all of whose leaves are outside K.
struct ExitSet {
  std::shared_ptr<const HistoryTree> tree;
  int root = 0;
  std::vector<int> nodes;          // Z, breadth first
  std::vector<char> in_z;          // per tree node
  std::vector<int> exit_of;        // per tree node: its prefix in Z, or -1
  bool no_exits = false;

  std::optional<int> theta(int node) const;
  std::vector<History> histories() const;
  std::vector<std::string> keys() const;
};

ExitSet exit_set(std::shared_ptr<const HistoryTree> tree, int root, const std::vector<char>& in_k);

// Stage of the unique prefix of h in Z.
std::optional<int> theta_K(const ExitSet& z, const History& h);

struct BlameFunction {
  std::string method = "min-likelihood";
  std::vector<PlayerId> blamed;        // per element of Z
  std::vector<char> uninformative;     // minimum likelihood tied
  std::vector<std::vector<double>> likelihood;  // per element, per player
  std::unordered_map<int, int> position;        // tree node -> index into Z

  // Blamed player for any node with a prefix in Z.
  PlayerId at(const ExitSet& z, int node) const;
};

// Blame the player whose realized actions between `root` and the Z-history are
// least likely under sigma* (policy per tree node); ties go to the lowest index.
BlameFunction min_likelihood_blame(const ExitSet& z, const std::vector<MixedProfile>& policy);

// Player-i deviation used when measuring blame errors.
struct Deviation {
  std::string name;
  std::function<MixedAction(int node)> play;
};

std::vector<Deviation> deviation_library(const HistoryTree& tree, const std::vector<MixedProfile>& policy,
                                         PlayerId i);

struct BlameErrorRow {
  PlayerId player = 0;
  std::string deviation;
  double rate = 0.0;  // P(reach Z and g != player)
  double standard_error = 0.0;
};

struct BlameErrorReport {
  std::vector<BlameErrorRow> rows;
  std::vector<double> worst_case;  // sup over all deviations of player i (exact DP)
  std::vector<double> max_rate;    // max over rows per player
  double eta = 0.0;
  bool within_eta = true;          // worst_case <= eta for every player
  bool statistical = false;
};

// rollouts == 0: exact enumeration; otherwise seeded Monte Carlo for the library rows.
BlameErrorReport measure_blame_error(const ExitSet& z, const BlameFunction& g,
                                     const std::vector<MixedProfile>& policy, double eta, long rollouts = 0,
                                     std::uint64_t seed = 0);

}  // namespace martin_games
