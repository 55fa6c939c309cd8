// Acceptance run: one PASS/FAIL line per criterion. Per-criterion reports go to
// acceptance_reports/ in the working directory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "martin_games/cli.hpp"
#include "martin_games/corpus.hpp"
#include "martin_games/detection.hpp"
#include "martin_games/errors.hpp"
#include "martin_games/game_io.hpp"
#include "martin_games/martin.hpp"
#include "martin_games/mediator.hpp"
#include "martin_games/oracle.hpp"
#include "martin_games/payoff.hpp"
#include "martin_games/report.hpp"
#include "martin_games/rng.hpp"
#include "martin_games/solvable.hpp"
#include "martin_games/synth.hpp"
#include "martin_games/values.hpp"

using namespace martin_games;
using nlohmann::json;

namespace {

constexpr std::uint64_t kCorpusSeed = 20240601;
constexpr std::uint64_t kSolvableSeed = 20240602;
constexpr std::uint64_t kZetaSeed = 20240603;
constexpr std::uint64_t kZeroSumSeed = 20240604;
constexpr std::uint64_t kMicroSeed = 20240605;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Instance {
  std::string name;
  std::uint64_t seed = 0;
  Game game;
};

std::vector<Instance> corpus(std::uint64_t seed, int count, const CorpusParams& params) {
  std::vector<Instance> out;
  for (const auto& e : generate_corpus(seed, count, params)) out.push_back({e.name, e.seed, game_from_json(e.document)});
  return out;
}

std::string corpus_hash(const std::vector<Instance>& games) {
  std::string all;
  for (const auto& g : games) all += json_hash(game_to_json(g.game));
  return hash_hex(fnv1a(all));
}

struct Outcome {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;
  std::optional<Report> report;
  double seconds = 0.0;
  // Wall-clock limits are checked outside the report so that reports stay byte-stable.
  std::vector<std::pair<std::string, bool>> timing;
};

Report make_report(int id, json config, const std::string& hash) {
  config["criterion"] = id;
  return Report("acceptance-" + std::to_string(id), std::move(config), hash);
}

// Shared per-game pipeline for the corpus criteria.
struct Certified {
  ValueTable values;
  MartinFunction d;
  AcceptableProfile acc;
};

Certified certify(const Game& game) {
  Certified c{compute_values(game), {}, {}};
  c.d = martin_finite_horizon(game, c.values);
  c.acc = acceptable_profile(game, c.d);
  return c;
}

// 1. Martin certification.
Outcome criterion1(const std::vector<Instance>& games) {
  Outcome o{1, "Martin certification", true};
  Report r = make_report(1, {{"corpus_seed", kCorpusSeed}, {"games", games.size()}, {"tol", 1e-6}}, corpus_hash(games));
  const auto t0 = Clock::now();
  double worst[4] = {0, 0, 0, 0};
  int failed = 0;
  for (const auto& inst : games) {
    const Certified c = certify(inst.game);
    const auto p1 = certify_property1(c.d, c.values, 0.0, 1e-6);
    const auto p2 = certify_property2(c.d, inst.game, 1e-6);
    const auto p3 = certify_property3(c.d, inst.game, c.acc.profile, History(inst.game.initial_state()), 1e-6);
    const bool ok = p1.pass && p2.pass && p3.pass && !p3.skipped && !p3.statistical &&
                    std::max({p1.worst_violation, p2.worst_violation, p3.worst_violation}) <= 1e-6;
    worst[1] = std::max(worst[1], p1.worst_violation);
    worst[2] = std::max(worst[2], p2.worst_violation);
    worst[3] = std::max(worst[3], p3.worst_violation);
    failed += !ok;
    r.add({{"type", "instance"}, {"name", inst.name}, {"pass", ok},
           {"p1", p1.worst_violation}, {"p2", p2.worst_violation}, {"p3", p3.worst_violation},
           {"witness", ok ? "" : p1.pass ? p2.pass ? p3.witness : p2.witness : p1.witness}});
  }
  o.seconds = seconds_since(t0);
  r.check("all games certified", failed == 0, {{"failed", failed}, {"worst", {worst[1], worst[2], worst[3]}}});
  o.timing.emplace_back("total runtime <= 300 s", o.seconds <= 300.0);
  o.pass = r.pass();
  o.summary = std::to_string(games.size() - failed) + "/" + std::to_string(games.size()) +
              " games, worst violations " + fmt(worst[1]) + " / " + fmt(worst[2]) + " / " + fmt(worst[3]);
  o.report = std::move(r);
  return o;
}

// 2. Subgame maxmin strategies.
Outcome criterion2(const std::vector<Instance>& games) {
  Outcome o{2, "Subgame epsilon-maxmin", true};
  Report r = make_report(2, {{"corpus_seed", kCorpusSeed}, {"epsilon", 1e-6}}, corpus_hash(games));
  const auto t0 = Clock::now();
  int failed = 0;
  long histories = 0;
  double worst = 0.0;
  for (const auto& inst : games) {
    const ValueTable values = compute_values(inst.game);
    bool ok = true;
    json players = json::array();
    for (PlayerId i = 0; i < inst.game.num_players(); ++i) {
      const auto s = subgame_maxmin_strategy(inst.game, i, values);
      const auto g = verify_subgame_maxmin(inst.game, s, values, 1e-6);
      ok = ok && g.pass;
      worst = std::max(worst, g.worst_violation);
      histories += g.checked;
      players.push_back({{"worst", g.worst_violation}, {"witness", g.witness}, {"pass", g.pass}});
    }
    failed += !ok;
    r.add({{"type", "instance"}, {"name", inst.name}, {"pass", ok}, {"players", players}});
  }
  o.seconds = seconds_since(t0);
  r.check("maxmin guarantee at every history", failed == 0, {{"failed", failed}, {"checked", histories}});
  o.pass = r.pass();
  o.summary = std::to_string(histories) + " (history, player) pairs, worst shortfall " + fmt(worst);
  o.report = std::move(r);
  return o;
}

// 3. Acceptable profiles and the payoff chain.
Outcome criterion3(const std::vector<Instance>& games) {
  Outcome o{3, "Acceptable profiles", true};
  Report r = make_report(3, {{"corpus_seed", kCorpusSeed}, {"epsilon", 1e-6}, {"chain_tol", 1e-6}},
                         corpus_hash(games));
  const auto t0 = Clock::now();
  int failed = 0;
  long checked = 0, holding = 0;
  double max_regret = 0.0;
  for (const auto& inst : games) {
    const Certified c = certify(inst.game);
    const auto g = verify_acceptable(inst.game, c.acc.profile, c.values, 1e-6 + c.acc.max_regret);
    const auto chain = verify_payoff_chain(inst.game, c.d, c.values, c.acc.profile, 0.0, 1e-6);
    const bool ok = g.pass && chain.holding == chain.checked;
    checked += chain.checked;
    holding += chain.holding;
    max_regret = std::max(max_regret, c.acc.max_regret);
    failed += !ok;
    r.add({{"type", "instance"}, {"name", inst.name}, {"pass", ok}, {"max_regret", c.acc.max_regret},
           {"acceptable_worst", g.worst_violation}, {"chain_worst", chain.worst_violation},
           {"witness", g.pass ? chain.witness : g.witness}});
  }
  o.seconds = seconds_since(t0);
  r.check("acceptable everywhere and chain at 100% of histories", failed == 0 && holding == checked,
          {{"failed", failed}, {"checked", checked}, {"holding", holding}});
  o.pass = r.pass();
  o.summary = "chain holds at " + std::to_string(holding) + "/" + std::to_string(checked) +
              " (history, player) pairs, max one-shot regret " + fmt(max_regret);
  o.report = std::move(r);
  return o;
}

// 4. Mediator bound.
Outcome criterion4(const std::vector<Instance>& all) {
  Outcome o{4, "Mediator bound", true};
  const std::vector<Instance> games(all.begin(), all.begin() + 50);
  Report r = make_report(4, {{"corpus_seed", kCorpusSeed}, {"games", 50}, {"epsilons", {0.02, 0.1}}, {"tol", 1e-6}},
                         corpus_hash(games));
  const auto t0 = Clock::now();
  int failed = 0;
  double worst_gain = 0.0, worst_gap = 0.0;
  for (const auto& inst : games) {
    for (double eps : {0.02, 0.1}) {
      const MediatedSystem sys = build_mediated(inst.game, eps);
      bool ok = true;
      std::vector<double> gains;
      for (PlayerId i = 0; i < inst.game.num_players(); ++i) {
        const double gain = best_deviation_gain(sys, i).gain;
        gains.push_back(gain);
        worst_gain = std::max(worst_gain, gain);
        ok = ok && gain <= eps + 1e-6;
      }
      const History start(inst.game.initial_state());
      std::map<std::string, double> diff;
      for (const auto& row : mediated_distribution(sys, start).rows) diff[inst.game.history_key(row.history)] += row.probability;
      for (const auto& row : enumerate(inst.game, sys.acceptable.profile, start).rows)
        diff[inst.game.history_key(row.history)] -= row.probability;
      double gap = 0.0;
      for (const auto& [k, d] : diff) gap = std::max(gap, std::abs(d));
      worst_gap = std::max(worst_gap, gap);
      ok = ok && gap == 0.0;
      failed += !ok;
      r.add({{"type", "instance"}, {"name", inst.name}, {"epsilon", eps}, {"pass", ok}, {"gains", gains}, {"gap", gap}});
    }
  }
  o.seconds = seconds_since(t0);
  r.check("gains within epsilon and distributions equal", failed == 0,
          {{"failed", failed}, {"worst_gain", worst_gain}, {"worst_gap", worst_gap}});
  o.pass = r.pass();
  o.summary = "100 (game, epsilon) pairs, largest gain " + fmt(worst_gain) + ", largest distribution gap " + fmt(worst_gap);
  o.report = std::move(r);
  return o;
}

// Random antichain drawn from the nodes of a tree.
TargetSet tree_antichain(const Game& game, const HistoryTree& tree, Rng& rng, int picks) {
  std::vector<int> chosen;
  for (int k = 0; k < picks; ++k) {
    const int v = 1 + rng.below(tree.size() - 1);
    bool ok = true;
    for (int u : chosen) ok = ok && !tree.is_ancestor(u, v) && !tree.is_ancestor(v, u);
    if (ok) chosen.push_back(v);
  }
  std::vector<History> members;
  for (int v : chosen) members.push_back(tree.history(v));
  return TargetSet(game, members);
}

// Antichain from prefixes of sampled runs (for games too large for a tree).
TargetSet sampled_antichain(const Game& game, const StrategyProfile& profile, Rng& rng, int picks, int stages) {
  std::vector<History> members;
  for (int k = 0; k < picks; ++k) {
    const History run = sample_run(game, profile, History(game.initial_state()), stages, rng.next());
    const History cand = run.prefix(2 + rng.below(stages));
    bool ok = true;
    for (const auto& m : members) ok = ok && !m.is_prefix_of(cand) && !cand.is_prefix_of(m);
    if (ok) members.push_back(cand);
  }
  return TargetSet(game, members);
}

StopRule hashed_stop(const Game& game, std::uint64_t salt, int modulus) {
  return [&game, salt, modulus](const History& h) {
    return fnv1a(game.history_key(h)) % static_cast<std::uint64_t>(modulus) == salt % modulus;
  };
}

StrategyProfile random_tabular(const Game& game, Rng& rng) {
  auto tree = std::make_shared<const HistoryTree>(full_tree(game));
  std::vector<MixedProfile> table(tree->size());
  for (int v = 0; v < tree->size(); ++v) {
    if (tree->is_leaf(v)) continue;
    for (PlayerId i = 0; i < game.num_players(); ++i) {
      MixedAction x(game.num_actions(i));
      double s = 0.0;
      for (auto& p : x) s += (p = rng.uniform() + 0.05);
      for (auto& p : x) p /= s;
      table[v].push_back(x);
    }
  }
  return StrategyProfile(StrategyProfile::Tabular{tree, table});
}

StrategyProfile random_stationary(const Game& game, Rng& rng) {
  std::vector<MixedProfile> by_state(game.num_states());
  for (auto& x : by_state)
    for (PlayerId i = 0; i < game.num_players(); ++i) {
      MixedAction a(game.num_actions(i));
      double s = 0.0;
      for (auto& p : a) s += (p = rng.uniform() + 0.05);
      for (auto& p : a) p /= s;
      x.push_back(a);
    }
  return StrategyProfile(StrategyProfile::Stationary{by_state});
}

// 5. Zeta identity.
Outcome criterion5() {
  Outcome o{5, "Zeta identity", true};
  CorpusParams small;
  small.min_horizon = 2;
  small.max_horizon = 4;
  small.history_cap = 5000;
  CorpusParams large;
  large.min_players = large.max_players = 2;
  large.max_states = 3;
  large.min_horizon = large.max_horizon = 7;
  large.history_cap = 1L << 40;
  large.sparse_rows = 0.0;
  Report r = make_report(5, {{"seed", kZetaSeed}, {"exact_triples", 200}, {"exact_tol", 1e-9},
                             {"mc_instances", 10}, {"rollouts", 100000}, {"mc_se", 3}},
                         "none");
  const auto t0 = Clock::now();
  Rng rng(kZetaSeed);
  int failed = 0;
  double worst = 0.0, mean_hit = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Game game = random_game(derive_seed(kZetaSeed, t), small);
    const HistoryTree tree = full_tree(game);
    StrategyProfile profile = t % 2 == 0 ? acceptable_profile(game, martin_finite_horizon(game)).profile
                                         : random_tabular(game, rng);
    const TargetSet q = tree_antichain(game, tree, rng, 1 + rng.below(8));
    const PlayerId i = rng.below(game.num_players());
    const int n = 2 + rng.below(tree.max_stage() - 1);
    StopRule stop;
    std::string stop_name;
    switch (t % 3) {
      case 0: stop = never_stop(); stop_name = "never"; break;
      case 1: {
        const int k = 1 + rng.below(tree.max_stage());
        stop = stop_at_stage(k);
        stop_name = "stage " + std::to_string(k);
        break;
      }
      default: stop = hashed_stop(game, rng.next(), 3); stop_name = "hash mod 3";
    }
    const auto rep = verify_zeta_identity(game, profile, i, q, n, stop, History(game.initial_state()));
    const bool ok = rep.discrepancy <= 1e-9;
    failed += !ok;
    worst = std::max(worst, rep.discrepancy);
    mean_hit += rep.hit_probability / 200;
    r.add({{"type", "exact"}, {"index", t}, {"targets", q.size()}, {"player", i}, {"n", n}, {"stop", stop_name},
           {"expected_zeta", rep.expected_zeta}, {"hit", rep.hit_probability}, {"discrepancy", rep.discrepancy},
           {"pass", ok}});
  }
  r.check("exact discrepancy <= 1e-9 on 200 triples", failed == 0, {{"failed", failed}, {"worst", worst}});
  int mc_failed = 0;
  double worst_z = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Game game = random_game(derive_seed(kZetaSeed + 1, t), large);
    const StrategyProfile profile = random_stationary(game, rng);
    const TargetSet q = sampled_antichain(game, profile, rng, 12, 6);
    const StopRule stop = t % 2 == 0 ? never_stop() : hashed_stop(game, rng.next(), 4);
    const auto rep = verify_zeta_identity(game, profile, t % 2, q, 2, stop, History(game.initial_state()), 100000,
                                          derive_seed(kZetaSeed + 2, t));
    const double z = rep.standard_error > 0 ? rep.discrepancy / rep.standard_error : 0.0;
    worst_z = std::max(worst_z, z);
    const bool ok = rep.statistical && rep.discrepancy <= 3 * rep.standard_error + 1e-12;
    mc_failed += !ok;
    r.add({{"type", "monte_carlo"}, {"index", t}, {"targets", q.size()}, {"expected_zeta", rep.expected_zeta},
           {"hit", rep.hit_probability}, {"discrepancy", rep.discrepancy}, {"standard_error", rep.standard_error},
           {"pass", ok}});
  }
  r.check("Monte Carlo within 3 standard errors on 10 instances", mc_failed == 0,
          {{"failed", mc_failed}, {"worst_z", worst_z}});
  o.seconds = seconds_since(t0);
  o.pass = r.pass();
  o.summary = "exact worst discrepancy " + fmt(worst) + " (mean hit probability " + fmt(mean_hit) +
              "), Monte Carlo worst |diff|/SE " + fmt(worst_z);
  o.report = std::move(r);
  return o;
}

// 6. Solvable subgame pipeline.
Outcome criterion6(const std::vector<Instance>& games) {
  Outcome o{6, "Solvable subgame", true};
  Report r = make_report(6, {{"corpus_seed", kSolvableSeed}, {"games", games.size()}, {"epsilon", 0.1},
                             {"required_fraction", 0.95}, {"on_path_tol", 1e-6}},
                         corpus_hash(games));
  int passing = 0, on_path_bad = 0, nontrivial = 0;
  double worst_gain = 0.0, slowest = 0.0;
  for (const auto& inst : games) {
    const auto t0 = Clock::now();
    json rec = {{"type", "instance"}, {"name", inst.name}};
    try {
      const SolvablePipeline p = solve_subgame(inst.game, 0.1);
      const int n = inst.game.num_players();
      const double sq = std::sqrt(p.delta);
      // Independent gain: best reply against sigma-hat from h*, by the oracle.
      const auto oracle_gain = equilibrium_check(inst.game, p.sigma_hat.profile, p.target.h_star);
      bool gains_ok = true, path_ok = true;
      json players = json::array();
      for (PlayerId i = 0; i < n; ++i) {
        const auto& v = p.report.players[i];
        gains_ok = gains_ok && v.gain <= 0.1 && oracle_gain[i] <= 0.1;
        path_ok = path_ok && v.on_path >= v.c - 2 * (n + 1) * sq - 1e-6;
        worst_gain = std::max({worst_gain, v.gain, oracle_gain[i]});
        players.push_back({{"gain", v.gain}, {"oracle_gain", oracle_gain[i]}, {"on_path", v.on_path}, {"c", v.c}});
      }
      nontrivial += !p.good.z.nodes.empty();
      passing += gains_ok;
      if (gains_ok && !path_ok) ++on_path_bad;
      rec.update({{"pass", gains_ok}, {"on_path_ok", path_ok}, {"delta", p.delta},
                  {"h_star", inst.game.history_key(p.target.h_star)}, {"exits", p.good.z.nodes.size()},
                  {"p_k", p.good.p_k}, {"players", players}, {"witness", gains_ok ? "" : p.report.witness}});
    } catch (const MartinError& e) {
      rec.update({{"pass", false}, {"error", e.what()}});
    }
    const double s = seconds_since(t0);
    slowest = std::max(slowest, s);
    o.seconds += s;
    r.add(rec);
  }
  const double fraction = static_cast<double>(passing) / games.size();
  r.check("gains <= epsilon on >= 95% of games", fraction >= 0.95, {{"passing", passing}, {"fraction", fraction}});
  r.check("on-path bound on every passing game", on_path_bad == 0, {{"violations", on_path_bad}});
  r.add({{"type", "summary"}, {"nonempty_exit_sets", nontrivial}, {"worst_gain", worst_gain}});
  o.timing.emplace_back("every game <= 30 s", slowest <= 30.0);
  o.pass = r.pass();
  o.summary = std::to_string(passing) + "/" + std::to_string(games.size()) + " games with gains <= 0.1 (worst " +
              fmt(worst_gain) + "), " + std::to_string(nontrivial) + " with nonempty exit sets, slowest " +
              fmt(slowest) + " s";
  o.report = std::move(r);
  return o;
}

// 7. Three-player zero-sum-total games.
Outcome criterion7() {
  Outcome o{7, "Zero-sum corollary", true};
  CorpusParams params;
  params.family = CorpusFamily::kZeroSumTotal;
  params.min_players = params.max_players = 3;
  const auto games = corpus(kZeroSumSeed, 50, params);
  Report r = make_report(7, {{"corpus_seed", kZeroSumSeed}, {"games", 50}, {"bound", 3e-6}}, corpus_hash(games));
  const auto t0 = Clock::now();
  int failed = 0;
  double worst = -1e300;
  for (const auto& inst : games) {
    const ValueTable values = compute_minmax_values(inst.game);
    const auto z = zero_sum_total_check(inst.game, values, 1e-6);
    const bool ok = z.sum <= 3e-6;
    worst = std::max(worst, z.sum);
    failed += !ok;
    r.add({{"type", "instance"}, {"name", inst.name}, {"sum", z.sum}, {"worst_total", z.worst_total}, {"pass", ok}});
  }
  o.seconds = seconds_since(t0);
  r.check("sum of minmax values <= 3e-6", failed == 0, {{"failed", failed}, {"largest_sum", worst}});
  o.pass = r.pass();
  o.summary = "largest sum of minmax values " + fmt(worst) + " over 50 games";
  o.report = std::move(r);
  return o;
}

// 8. Submartingale property.
Outcome criterion8(const std::vector<Instance>& games) {
  Outcome o{8, "Submartingale property", true};
  Report r = make_report(8, {{"corpus_seed", kCorpusSeed}, {"tol", 1e-9}}, corpus_hash(games));
  const auto t0 = Clock::now();
  int failed = 0;
  long checked = 0;
  double worst = 0.0;
  for (const auto& inst : games) {
    const Certified c = certify(inst.game);
    const auto s = verify_submartingale(compute_processes(c.d, c.acc.profile), 1e-9);
    checked += s.checked;
    worst = std::max(worst, s.worst);
    failed += !s.pass;
    r.add({{"type", "instance"}, {"name", inst.name}, {"worst", s.worst}, {"witness", s.witness}, {"pass", s.pass}});
  }
  o.seconds = seconds_since(t0);
  r.check("W >= Y - 1e-9 everywhere", failed == 0, {{"failed", failed}, {"checked", checked}});
  o.pass = r.pass();
  o.summary = std::to_string(checked) + " (history, player) pairs, largest Y - W " + fmt(worst);
  o.report = std::move(r);
  return o;
}

// 9. Oracle self-consistency.
Outcome criterion9() {
  Outcome o{9, "Oracle self-consistency", true};
  CorpusParams micro;
  micro.max_states = 2;
  micro.max_horizon = 2;
  const auto games = corpus(kMicroSeed, 20, micro);
  Report r = make_report(9, {{"corpus_seed", kMicroSeed}, {"games", 20}, {"tol", 1e-9}, {"probability_tol", 1e-12}},
                         corpus_hash(games));
  const auto t0 = Clock::now();
  Rng rng(kMicroSeed);
  int failed = 0;
  double worst = 0.0, worst_mass = 0.0;
  for (const auto& inst : games) {
    const StrategyProfile profile = random_tabular(inst.game, rng);
    const HistoryTree tree = full_tree(inst.game);
    const auto policy = profile.materialize(tree);
    bool ok = true;
    json players = json::array();
    for (PlayerId i = 0; i < inst.game.num_players(); ++i) {
      const double dp = best_response_value(tree, policy, i).value;
      const double brute = pure_strategy_enumeration(tree, policy, i);
      worst = std::max(worst, std::abs(dp - brute));
      ok = ok && std::abs(dp - brute) <= 1e-9;
      players.push_back({{"dp", dp}, {"enumeration", brute}});
    }
    const double mass = enumerate(inst.game, profile, History(inst.game.initial_state())).total_probability();
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    ok = ok && std::abs(mass - 1.0) <= 1e-12;
    failed += !ok;
    r.add({{"type", "instance"}, {"name", inst.name}, {"players", players}, {"mass", mass}, {"pass", ok}});
  }
  o.seconds = seconds_since(t0);
  r.check("best response equals enumeration; probabilities sum to 1", failed == 0,
          {{"failed", failed}, {"worst", worst}, {"worst_mass", worst_mass}});
  o.pass = r.pass();
  o.summary = "worst best-response discrepancy " + fmt(worst) + ", worst |mass - 1| " + fmt(worst_mass);
  o.report = std::move(r);
  return o;
}

std::vector<Outcome> run_suite() {
  const auto games = corpus(kCorpusSeed, 100, CorpusParams{});
  const auto solvable_games = corpus(kSolvableSeed, 50, CorpusParams{});
  std::vector<Outcome> out;
  out.push_back(criterion1(games));
  out.push_back(criterion2(games));
  out.push_back(criterion3(games));
  out.push_back(criterion4(games));
  out.push_back(criterion5());
  out.push_back(criterion6(solvable_games));
  out.push_back(criterion7());
  out.push_back(criterion8(games));
  out.push_back(criterion9());
  return out;
}

// CLI artifacts from seeded stochastic modes.
std::vector<std::string> cli_artifacts(const std::filesystem::path& dir) {
  const auto entries = generate_corpus(kCorpusSeed, 2, CorpusParams{});
  std::vector<std::string> out;
  for (const auto& e : entries) {
    const auto path = dir / (e.name + ".json");
    write_text(path.string(), e.document.dump(2) + "\n");
    for (const char* sub : {"mediate", "solve-subgame"}) {
      RunConfig c;
      c.subcommand = sub;
      c.game_path = path.string();
      c.seed = 7;
      c.rollouts = 2000;
      const RunResult res = run(c);
      out.push_back(res.report ? res.report->jsonl() : res.error);
    }
  }
  return out;
}

}  // namespace

int main() {
  const std::filesystem::path dir = "acceptance_reports";
  std::filesystem::create_directories(dir);
  const auto t0 = Clock::now();
  std::vector<Outcome> first = run_suite();
  const auto cli_first = cli_artifacts(dir / "games");
  std::cerr << "first pass " << fmt(seconds_since(t0)) << " s\n";
  std::vector<Outcome> second = run_suite();
  const auto cli_second = cli_artifacts(dir / "games");

  bool all = true;
  for (const auto& o : first) {
    bool pass = o.pass;
    std::string extra;
    for (const auto& [what, ok] : o.timing) {
      pass = pass && ok;
      if (!ok) extra += "; timing failed: " + what;
    }
    all = all && pass;
    o.report->write((dir / ("criterion_" + std::to_string(o.id))).string());
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << o.id << " (" << o.title << "): " << o.summary
              << " [" << fmt(o.seconds) << " s]" << extra << '\n';
  }

  int differing = 0;
  std::string digest;
  for (std::size_t k = 0; k < first.size(); ++k) {
    const std::string a = first[k].report->jsonl() + first[k].report->markdown();
    const std::string b = second[k].report->jsonl() + second[k].report->markdown();
    differing += a != b;
    digest += hash_hex(fnv1a(a));
  }
  for (std::size_t k = 0; k < cli_first.size(); ++k) differing += cli_first[k] != cli_second[k];
  Report det = make_report(10, {{"runs", 2}}, "none");
  det.check("byte-identical reports across two runs", differing == 0,
            {{"reports", first.size() + cli_first.size()}, {"differing", differing}, {"digest", hash_hex(fnv1a(digest))}});
  det.write((dir / "criterion_10").string());
  all = all && det.pass();
  std::cout << (det.pass() ? "PASS" : "FAIL") << " criterion 10 (Determinism): "
            << first.size() + cli_first.size() << " reports compared across two runs, " << differing
            << " differing, suite digest " << hash_hex(fnv1a(digest)) << '\n';
  return all ? 0 : 1;
}
