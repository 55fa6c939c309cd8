#include "martin_games/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "martin_games/errors.hpp"

namespace martin_games {

History History::concat(const History& tail) const {
  if (states.empty()) return tail;
  if (tail.states.empty()) return *this;
  if (last_state() != tail.first_state())
    throw InvalidInputError("concatenation requires matching boundary state");
  History h = *this;
  h.states.insert(h.states.end(), tail.states.begin() + 1, tail.states.end());
  h.profiles.insert(h.profiles.end(), tail.profiles.begin(), tail.profiles.end());
  return h;
}

const char* payoff_class_name(PayoffClass c) {
  switch (c) {
    case PayoffClass::kFiniteHorizon: return "finite_horizon";
    case PayoffClass::kDiscounted: return "discounted";
    case PayoffClass::kReachability: return "reachability";
    case PayoffClass::kMeanPayoff: return "mean_payoff";
  }
  return "unknown";
}

bool Normalization::identity() const {
  for (std::size_t i = 0; i < scale.size(); ++i)
    if (offset[i] != 0.0 || scale[i] != 1.0) return false;
  return true;
}

namespace {

std::vector<std::string> numbered(const std::string& prefix, int count) {
  std::vector<std::string> names;
  for (int k = 0; k < count; ++k) names.push_back(prefix + std::to_string(k));
  return names;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Range of player i's entries in a [state][profile][player] reward array.
Range reward_range(const std::vector<double>& rewards, int n, PlayerId i) {
  if (rewards.empty()) return {};
  Range r{rewards[i], rewards[i]};
  for (std::size_t k = i; k < rewards.size(); k += n) {
    r.lo = std::min(r.lo, rewards[k]);
    r.hi = std::max(r.hi, rewards[k]);
  }
  return r;
}

void rescale(std::vector<double>& values, int n, PlayerId i, double shift, double scale) {
  for (std::size_t k = i; k < values.size(); k += n) values[k] = (values[k] - shift) / scale;
}

}  // namespace

Game::Game(std::vector<std::string> players, std::vector<std::string> states,
           std::vector<std::vector<std::string>> actions, std::vector<double> transitions,
           PayoffSpec payoff, StateId initial_state)
    : players_(std::move(players)),
      states_(std::move(states)),
      actions_(std::move(actions)),
      transitions_(std::move(transitions)),
      payoff_(std::move(payoff)),
      initial_state_(initial_state) {
  if (players_.empty()) throw InvalidInputError("a game needs at least one player");
  if (actions_.size() != players_.size())
    throw InvalidInputError("actions must list one action set per player");
  init_strides();
  normalize_payoffs();
}

Game::Game(const Game& base, PayoffSpec payoff, StateId initial_state, Normalized)
    : players_(base.players_),
      states_(base.states_),
      actions_(base.actions_),
      transitions_(base.transitions_),
      strides_(base.strides_),
      num_profiles_(base.num_profiles_),
      payoff_(std::move(payoff)),
      normalization_(base.normalization_),
      initial_state_(initial_state) {}

Game Game::make(int players, int states, const std::vector<int>& actions,
                std::vector<double> transitions, PayoffSpec payoff, StateId initial_state) {
  std::vector<std::vector<std::string>> action_names;
  for (int count : actions) action_names.push_back(numbered("a", count));
  return Game(numbered("p", players), numbered("s", states), std::move(action_names),
              std::move(transitions), std::move(payoff), initial_state);
}

Game Game::with_normalized_payoff(PayoffSpec payoff, StateId initial_state) const {
  return Game(*this, std::move(payoff), initial_state, Normalized{});
}

Game Game::with_normalization(Normalization map) const {
  if (!normalization_.identity()) throw InvalidInputError("payoffs are not in normalized units");
  const std::size_t n = players_.size();
  if (map.offset.size() != n || map.scale.size() != n)
    throw InvalidInputError("normalization needs one offset and one scale per player");
  for (double s : map.scale)
    if (!(s > 0.0)) throw InvalidInputError("normalization scales must be positive");
  Game g = *this;
  g.normalization_ = std::move(map);
  return g;
}

void Game::init_strides() {
  const int n = num_players();
  strides_.assign(n, 1);
  num_profiles_ = 1;
  for (int i = n - 1; i >= 0; --i) {
    strides_[i] = num_profiles_;
    num_profiles_ *= std::max(1, num_actions(i));
  }
  const std::size_t expected = states_.size() * static_cast<std::size_t>(num_profiles_) * states_.size();
  if (transitions_.size() != expected) {
    std::ostringstream msg;
    msg << "transitions has " << transitions_.size() << " entries, expected " << expected
        << " ([state][profile][state])";
    throw InvalidInputError(msg.str());
  }
}

void Game::normalize_payoffs() {
  const int n = num_players();
  const std::size_t reward_size = states_.size() * static_cast<std::size_t>(num_profiles_) * n;
  auto check_rewards = [&](const std::vector<double>& r) {
    if (!r.empty() && r.size() != reward_size)
      throw InvalidInputError("rewards must be a [state][profile][player] array");
  };
  normalization_.offset.assign(n, 0.0);
  normalization_.scale.assign(n, 1.0);

  auto choose = [&](PlayerId i, double lo, double hi) -> std::pair<double, double> {
    constexpr double kSlack = 1e-12;
    if (lo >= -kSlack && hi <= 1.0 + kSlack) return {0.0, 1.0};
    const double range = hi - lo;
    if (range <= 0.0) return {lo, 1.0};
    (void)i;
    return {lo, range};
  };

  if (auto* fh = std::get_if<FiniteHorizon>(&payoff_.kind)) {
    check_rewards(fh->rewards);
    if (fh->horizon < 0) throw InvalidInputError("finite horizon must be positive");
    if (!fh->terminal.empty() && fh->terminal.size() != states_.size() * n)
      throw InvalidInputError("terminal must be a [state][player] array");
    for (PlayerId i = 0; i < n; ++i) {
      double lo = 0.0, hi = 0.0;
      if (fh->constant) {
        lo = hi = (*fh->constant)[i];
      } else if (fh->table) {
        bool first = true;
        for (const auto& [key, values] : *fh->table) {
          if (static_cast<int>(values.size()) != n)
            throw InvalidInputError("payoff table entry " + key + " has wrong player count");
          lo = first ? values[i] : std::min(lo, values[i]);
          hi = first ? values[i] : std::max(hi, values[i]);
          first = false;
        }
      } else {
        const Range z = reward_range(fh->rewards, n, i);
        const Range g = reward_range(fh->terminal, n, i);
        lo = fh->horizon * z.lo + g.lo;
        hi = fh->horizon * z.hi + g.hi;
      }
      auto [shift, scale] = choose(i, lo, hi);
      normalization_.offset[i] = shift;
      normalization_.scale[i] = scale;
      if (shift == 0.0 && scale == 1.0) continue;
      if (fh->constant) {
        (*fh->constant)[i] = ((*fh->constant)[i] - shift) / scale;
      } else if (fh->table) {
        for (auto& [key, values] : *fh->table) values[i] = (values[i] - shift) / scale;
      } else {
        const Range z = reward_range(fh->rewards, n, i);
        const Range g = reward_range(fh->terminal, n, i);
        rescale(fh->rewards, n, i, z.lo, scale);
        rescale(fh->terminal, n, i, g.lo, scale);
      }
    }
  } else if (auto* rewarded = std::get_if<Discounted>(&payoff_.kind)) {
    check_rewards(rewarded->rewards);
    for (PlayerId i = 0; i < n; ++i) {
      const Range z = reward_range(rewarded->rewards, n, i);
      auto [shift, scale] = choose(i, z.lo, z.hi);
      normalization_.offset[i] = shift;
      normalization_.scale[i] = scale;
      if (shift != 0.0 || scale != 1.0) rescale(rewarded->rewards, n, i, shift, scale);
    }
  } else if (auto* mean = std::get_if<MeanPayoff>(&payoff_.kind)) {
    check_rewards(mean->rewards);
    for (PlayerId i = 0; i < n; ++i) {
      const Range z = reward_range(mean->rewards, n, i);
      auto [shift, scale] = choose(i, z.lo, z.hi);
      normalization_.offset[i] = shift;
      normalization_.scale[i] = scale;
      if (shift != 0.0 || scale != 1.0) rescale(mean->rewards, n, i, shift, scale);
    }
  } else if (auto* reach = std::get_if<Reachability>(&payoff_.kind)) {
    if (static_cast<int>(reach->targets.size()) != n)
      throw InvalidInputError("reachability needs one target set per player");
  }
}

ProfileIndex Game::encode(std::span<const ActionId> actions) const {
  ProfileIndex a = 0;
  for (PlayerId i = 0; i < num_players(); ++i) a += actions[i] * strides_[i];
  return a;
}

std::vector<ActionId> Game::decode(ProfileIndex a) const {
  std::vector<ActionId> actions(num_players());
  for (PlayerId i = 0; i < num_players(); ++i) actions[i] = action_of(a, i);
  return actions;
}

double Game::stage_reward(StateId s, ProfileIndex a, PlayerId i) const {
  const std::vector<double>* rewards = nullptr;
  if (auto* fh = payoff_.finite_horizon()) rewards = &fh->rewards;
  else if (auto* d = payoff_.discounted()) rewards = &d->rewards;
  else if (auto* m = payoff_.mean_payoff()) rewards = &m->rewards;
  if (rewards == nullptr || rewards->empty()) return 0.0;
  return (*rewards)[(static_cast<std::size_t>(s) * num_profiles_ + a) * num_players() + i];
}

double Game::terminal_payoff(StateId s, PlayerId i) const {
  auto* fh = payoff_.finite_horizon();
  if (fh == nullptr || fh->terminal.empty()) return 0.0;
  return fh->terminal[static_cast<std::size_t>(s) * num_players() + i];
}

std::string Game::profile_string(ProfileIndex a) const {
  std::string out;
  for (PlayerId i = 0; i < num_players(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(action_of(a, i));
  }
  return out;
}

std::string Game::history_key(const History& h) const {
  std::string key;
  for (int k = 0; k < h.stage(); ++k) {
    if (k > 0) key += '/' + profile_string(h.profiles[k - 1]) + '/';
    key += std::to_string(h.states[k]);
  }
  return key;
}

History Game::parse_history_key(const std::string& key) const {
  History h;
  std::vector<std::string> parts;
  std::string current;
  for (char c : key) {
    if (c == '/') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  if (parts.size() % 2 == 0) throw ParseError("malformed history key '" + key + "'");
  try {
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (k % 2 == 0) {
        const int s = std::stoi(parts[k]);
        if (s < 0 || s >= num_states()) throw ParseError("unknown state in history key '" + key + "'");
        h.states.push_back(s);
      } else {
        std::vector<ActionId> actions;
        std::stringstream ss(parts[k]);
        std::string item;
        while (std::getline(ss, item, ',')) actions.push_back(std::stoi(item));
        if (static_cast<int>(actions.size()) != num_players())
          throw ParseError("wrong profile arity in history key '" + key + "'");
        for (PlayerId i = 0; i < num_players(); ++i)
          if (actions[i] < 0 || actions[i] >= num_actions(i))
            throw ParseError("unknown action in history key '" + key + "'");
        h.profiles.push_back(encode(actions));
      }
    }
  } catch (const std::logic_error&) {
    throw ParseError("malformed history key '" + key + "'");
  }
  return h;
}

namespace {

bool finite(double x) { return std::isfinite(x); }

// States reachable from `from` along positive transitions under some profile.
std::vector<char> reachable_states(const Game& game, StateId from) {
  std::vector<char> seen(game.num_states(), 0);
  std::vector<StateId> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a)
      for (StateId t = 0; t < game.num_states(); ++t)
        if (game.transition(s, a, t) > 0.0 && !seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
  }
  return seen;
}

}  // namespace

ValidationReport validate_game(const Game& game) {
  ValidationReport report;
  auto add = [&](const std::string& kind, const std::string& message) {
    report.violations.push_back({kind, message});
  };
  if (game.num_states() < 1) add("empty state set", "a game needs at least one state");
  for (PlayerId i = 0; i < game.num_players(); ++i)
    if (game.num_actions(i) < 1)
      add("empty action set", "player " + std::to_string(i) + " has no actions");
  if (game.initial_state() < 0 || game.initial_state() >= game.num_states())
    add("unknown state", "initial state " + std::to_string(game.initial_state()) + " is not a state");
  if (!report.ok()) return report;

  for (StateId s = 0; s < game.num_states(); ++s) {
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      double sum = 0.0;
      bool bad_entry = false;
      for (double p : game.transition_row(s, a)) {
        if (!finite(p) || p < 0.0) bad_entry = true;
        sum += p;
      }
      const std::string where = "state " + std::to_string(s) + ", profile (" + game.profile_string(a) + ")";
      if (bad_entry) add("negative probability", "transition row at " + where + " has a negative or non-finite entry");
      if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "transition row at " << where << " sums to " << sum;
        add("row sum", msg.str());
      }
    }
  }

  const PayoffSpec& payoff = game.payoff();
  auto check_finite = [&](const std::vector<double>& values, const std::string& what) {
    for (double v : values)
      if (!finite(v)) {
        add("non-finite payoff", what + " contains a non-finite value");
        return;
      }
  };
  if (auto* fh = payoff.finite_horizon()) {
    if (fh->horizon < 1 && fh->prefix.states.empty())
      add("horizon", "finite horizon must be a positive integer");
    check_finite(fh->rewards, "rewards");
    check_finite(fh->terminal, "terminal");
    if (fh->table && fh->prefix.states.empty() && report.ok()) {
      // Coverage of all positive-probability complete histories is checked by
      // enumerating them from the initial state.
      std::size_t covered = 0;
      std::vector<History> frontier{History(game.initial_state())};
      for (int round = 0; round < fh->horizon; ++round) {
        std::vector<History> next;
        for (const History& h : frontier)
          for (ProfileIndex a = 0; a < game.num_profiles(); ++a)
            for (StateId t = 0; t < game.num_states(); ++t)
              if (game.transition(h.last_state(), a, t) > 0.0) next.push_back(h.extended(a, t));
        frontier = std::move(next);
        if (frontier.size() > 200000) break;
      }
      for (const History& h : frontier) {
        if (fh->table->count(game.history_key(h)) == 0) {
          add("table coverage", "payoff table misses history " + game.history_key(h));
          break;
        }
        ++covered;
      }
      if (covered == frontier.size() && fh->table->size() != covered)
        add("table coverage", "payoff table has entries for histories that are not positive-probability complete histories");
    }
  } else if (auto* d = payoff.discounted()) {
    if (!(d->discount >= 0.0 && d->discount < 1.0))
      add("discount", "discount factor must lie in [0, 1)");
    check_finite(d->rewards, "rewards");
  } else if (auto* m = payoff.mean_payoff()) {
    check_finite(m->rewards, "rewards");
  } else if (auto* r = payoff.reachability()) {
    for (std::size_t i = 0; i < r->targets.size(); ++i)
      for (StateId t : r->targets[i])
        if (t < 0 || t >= game.num_states())
          add("unknown state", "reachability target " + std::to_string(t) + " of player " +
                                   std::to_string(i) + " is not a state");
    if (report.ok()) {
      const auto seen = reachable_states(game, game.initial_state());
      for (std::size_t i = 0; i < r->targets.size(); ++i) {
        bool any = r->targets[i].empty();
        for (StateId t : r->targets[i]) any = any || seen[t];
        if (!any)
          add("unreachable target", "no target of player " + std::to_string(i) +
                                        " is reachable from the initial state");
      }
    }
  }
  return report;
}

void require_valid(const Game& game) {
  const ValidationReport report = validate_game(game);
  if (report.ok()) return;
  std::string msg = "invalid game:";
  for (const auto& v : report.violations) msg += " [" + v.kind + "] " + v.message + ";";
  throw InvalidInputError(msg);
}

int full_horizon_stage(const Game& game) {
  if (auto* fh = game.payoff().finite_horizon()) return fh->horizon + 1;
  return -1;
}

}  // namespace martin_games
