#include "martin_games/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "martin_games/corpus.hpp"
#include "martin_games/errors.hpp"
#include "martin_games/game_io.hpp"
#include "martin_games/martin.hpp"
#include "martin_games/mediator.hpp"
#include "martin_games/oracle.hpp"
#include "martin_games/solvable.hpp"
#include "martin_games/synth.hpp"
#include "martin_games/values.hpp"

namespace martin_games {

using nlohmann::json;

namespace {

const char* const kSubcommands[] = {"validate", "values", "martin", "synth", "mediate",
                                    "solve-subgame", "corpus", "check-zero-sum"};

double tolerance(const RunConfig& c) {
  if (c.tol) return *c.tol;
  return c.subcommand == "check-zero-sum" ? 1e-6 : 1e-9;
}

int value_depth(const Game& game, const RunConfig& c) {
  if (game.payoff().finite_horizon()) return 0;
  return c.depth > 0 ? c.depth : 3;
}

std::vector<double> original_units(const Game& game, std::vector<double> v) {
  for (PlayerId i = 0; i < static_cast<int>(v.size()); ++i) v[i] = game.normalization().denormalize(i, v[i]);
  return v;
}

std::vector<double> node_row(const std::vector<double>& table, int v, int n) {
  return {table.begin() + static_cast<std::ptrdiff_t>(v) * n, table.begin() + static_cast<std::ptrdiff_t>(v + 1) * n};
}

json certification_json(const CertificationReport& r) {
  return {{"property", r.property},        {"worst_violation", r.worst_violation},
          {"tolerance", r.tolerance},      {"witness", r.witness},
          {"witness_player", r.witness_player}, {"statistical", r.statistical},
          {"skipped", r.skipped},          {"checked", r.checked},
          {"note", r.note}};
}

json guarantee_json(const GuaranteeReport& r) {
  return {{"epsilon", r.epsilon},          {"tolerance", r.tolerance},
          {"worst_violation", r.worst_violation}, {"witness", r.witness},
          {"witness_player", r.witness_player},   {"checked", r.checked}};
}

void game_summary(const Game& game, Report& report) {
  json actions = json::array();
  for (PlayerId i = 0; i < game.num_players(); ++i) actions.push_back(game.num_actions(i));
  json g = {{"type", "game"},
            {"players", game.num_players()},
            {"states", game.num_states()},
            {"actions", actions},
            {"payoff_class", payoff_class_name(game.payoff_class())},
            {"declared_shift_invariant", game.payoff().declared_shift_invariant},
            {"initial_state", game.initial_state()}};
  if (const auto* fh = game.payoff().finite_horizon()) g["horizon"] = fh->horizon;
  report.add(g);
}

void cmd_validate(const RunConfig&, const Game& game, Report& report, RunResult&) {
  game_summary(game, report);
  const ValidationReport v = validate_game(game);
  for (const auto& x : v.violations) report.add({{"type", "violation"}, {"kind", x.kind}, {"message", x.message}});
  report.check("game is valid", v.ok(), {{"violations", v.violations.size()}});
}

void cmd_values(const RunConfig& c, const Game& game, Report& report, RunResult&) {
  require_valid(game);
  const ValueTable values = compute_values(game, value_depth(game, c));
  const HistoryTree& tree = *values.tree;
  const int n = game.num_players();
  for (int v = 0; v < tree.size(); ++v)
    report.add({{"type", "node"},
                {"history", tree.key(v)},
                {"vbar", node_row(values.minmax, v, n)},
                {"vbar_lower", node_row(values.minmax_lower, v, n)},
                {"vlow", node_row(values.maxmin, v, n)}});
  report.add({{"type", "root"},
              {"vbar", original_units(game, node_row(values.minmax, 0, n))},
              {"vlow", original_units(game, node_row(values.maxmin, 0, n))},
              {"units", "original"},
              {"tolerance", values.tolerance},
              {"certified", values.certified}});
  if (!values.certified) report.flag("some three-player minmax brackets are wider than the certification tolerance");
  report.note("Values are in normalized units per node; the root record is in original units.");
}

void cmd_martin(const RunConfig& c, const Game& game, Report& report, RunResult&) {
  require_valid(game);
  const double tol = tolerance(c);
  const History root(game.initial_state());
  const bool finite = game.payoff().finite_horizon() != nullptr;
  if (!finite && game.payoff().discounted() == nullptr)
    throw UnsupportedError("Martin construction needs a finite-horizon or discounted payoff");
  const ValueTable values = compute_values(game, value_depth(game, c));
  const MartinFunction d =
      finite ? martin_finite_horizon(game, values) : martin_discounted(game, c.epsilon, value_depth(game, c));
  const double eps = finite ? 0.0 : c.epsilon;
  const AcceptableProfile acc = acceptable_profile(game, d);
  const auto p1 = certify_property1(d, values, eps, tol + (finite ? 0.0 : values.tolerance));
  const auto p2 = certify_property2(d, game, tol);
  const auto p3 = certify_property3(d, game, acc.profile, root, tol);
  report.add({{"type", "martin"},
              {"epsilon", eps},
              {"depth", d.depth},
              {"tolerance", d.tolerance},
              {"root", node_row(d.values, 0, d.num_players)},
              {"max_regret", acc.max_regret}});
  for (const auto* r : {&p1, &p2, &p3})
    report.check("property " + std::to_string(r->property), r->pass, certification_json(*r));
  if (p3.statistical) report.flag("property 3: " + p3.note);
  if (!values.certified) report.flag("minmax brackets not certified");
}

void cmd_synth(const RunConfig& c, const Game& game, Report& report, RunResult&) {
  require_valid(game);
  const double tol = tolerance(c);
  if (c.mode == "maxmin") {
    const ValueTable values = compute_values(game, value_depth(game, c));
    for (PlayerId i = 0; i < game.num_players(); ++i) {
      const BehaviorStrategy s = subgame_maxmin_strategy(game, i, values);
      const GuaranteeReport r = verify_subgame_maxmin(game, s, values, c.epsilon, tol);
      json details = guarantee_json(r);
      details["player"] = i;
      details["root_mix"] = s.at(0);
      report.check("player " + std::to_string(i) + " subgame maxmin", r.pass, details);
    }
    if (game.num_players() >= 3) report.note("Three-player coalition check is pessimistic (correlated opponents).");
    return;
  }
  if (c.mode != "acceptable") throw InvalidInputError("synth mode must be maxmin or acceptable");
  if (!game.payoff().finite_horizon()) throw UnsupportedError("acceptable profiles need a finite-horizon payoff");
  const ValueTable values = compute_values(game);
  const MartinFunction d = martin_finite_horizon(game, values);
  const AcceptableProfile acc = acceptable_profile(game, d);
  const GuaranteeReport g = verify_acceptable(game, acc.profile, values, c.epsilon + acc.max_regret, tol);
  const ChainReport chain = verify_payoff_chain(game, d, values, acc.profile, d.epsilon, tol);
  std::map<std::string, int> methods;
  for (const auto& m : acc.method)
    if (!m.empty()) ++methods[m];
  report.add({{"type", "acceptable"}, {"max_regret", acc.max_regret}, {"methods", methods}});
  report.check("acceptable", g.pass, guarantee_json(g));
  report.check("payoff chain", chain.pass && chain.holding == chain.checked,
               {{"checked", chain.checked},
                {"holding", chain.holding},
                {"worst_violation", chain.worst_violation},
                {"witness", chain.witness},
                {"witness_player", chain.witness_player}});
}

void cmd_mediate(const RunConfig& c, const Game& game, Report& report, RunResult& result) {
  require_valid(game);
  const double tol = tolerance(c);
  const MediatedSystem sys = build_mediated(game, c.epsilon);
  report.add({{"type", "mediator"}, {"epsilon", sys.epsilon}, {"delta", sys.delta}});
  for (PlayerId i = 0; i < game.num_players(); ++i) {
    const DeviationGain g = best_deviation_gain(sys, i, tol);
    report.check("player " + std::to_string(i) + " deviation gain <= epsilon", g.within_bound,
                 {{"player", i},
                  {"gain", g.gain},
                  {"follow_value", g.follow_value},
                  {"deviation_value", g.deviation_value},
                  {"bound", g.bound}});
  }
  const History start(game.initial_state());
  const EnumerationTable dist = mediated_distribution(sys, start);
  const EnumerationTable ref = enumerate(game, sys.acceptable.profile, start);
  std::map<std::string, double> diff;
  for (const auto& r : dist.rows) diff[game.history_key(r.history)] += r.probability;
  for (const auto& r : ref.rows) diff[game.history_key(r.history)] -= r.probability;
  double gap = 0.0;
  for (const auto& [k, d] : diff) gap = std::max(gap, std::abs(d));
  report.check("no-deviation distribution equals sigma*", gap <= 1e-12,
               {{"max_gap", gap}, {"histories", diff.size()}});
  if (c.rollouts > 0) {
    const MonteCarloEstimate mc = simulate_mediated(sys, start, c.rollouts, *c.seed);
    const auto exact = dist.expected_payoff();
    bool close = true;
    for (PlayerId i = 0; i < game.num_players(); ++i)
      close = close && std::abs(mc.mean[i] - exact[i]) <= 3.0 * mc.standard_error[i] + tol;
    report.add({{"type", "simulation"},
                {"rollouts", mc.rollouts},
                {"mean", mc.mean},
                {"standard_error", mc.standard_error},
                {"exact", exact},
                {"within_3se", close}});
    if (!close) report.flag("simulated payoffs outside 3 standard errors of the exact values");
    Rng rng(*c.seed);
    const MediatedRun run = play_mediated(sys, start, rng);
    result.files.emplace_back("transcript.jsonl", transcript_jsonl(sys, run));
  }
}

void cmd_solve(const RunConfig& c, const Game& game, Report& report, RunResult&) {
  require_valid(game);
  SolvableOptions opt;
  opt.delta = c.delta;
  opt.seed = c.seed.value_or(0);
  opt.blame_rollouts = c.rollouts;
  opt.tol = tolerance(c);
  const SolvablePipeline p = solve_subgame(game, c.epsilon, opt);
  const auto& t = p.target;
  const auto& g = p.good;
  const auto& r = p.report;
  report.add({{"type", "target"},
              {"h_star", game.history_key(t.h_star)},
              {"n_star", t.n_star},
              {"n0", t.n0}, {"n1", t.n1}, {"n2", t.n2}, {"n3", t.n3},
              {"c", t.c},
              {"p1", t.p1}, {"p2", t.p2}, {"p3", t.p3},
              {"p_r0", t.p_r0},
              {"p_r0_given_h_star", t.p_r0_given_h_star}});
  long uninformative = std::count(g.blame.uninformative.begin(), g.blame.uninformative.end(), 1);
  report.add({{"type", "good_set"},
              {"p_k", g.p_k},
              {"bound", g.bound},
              {"exits", g.z.nodes.size()},
              {"exit_histories", g.z.keys()},
              {"uninformative_blame", uninformative},
              {"blame_error_worst", g.blame_error.worst_case},
              {"blame_error_within_eta", g.blame_error.within_eta},
              {"partition_ok", g.partition_ok},
              {"partition_witness", g.partition_witness},
              {"memory_states", p.sigma_hat.memory_states}});
  report.add({{"type", "parameters"},
              {"epsilon", r.epsilon},
              {"delta", r.delta},
              {"sqrt_delta", r.sqrt_delta},
              {"eta", r.eta},
              {"final_bound", r.final_bound}});
  for (PlayerId i = 0; i < game.num_players(); ++i) {
    const auto& v = r.players[i];
    json subsets = json::array();
    for (const auto& s : v.subsets)
      subsets.push_back({{"subset", s.subset},
                         {"probability", s.probability},
                         {"payoff_mass", s.payoff_mass},
                         {"bound", s.bound},
                         {"within", s.within},
                         {"witness", s.witness}});
    report.check("player " + std::to_string(i) + " on-path payoff", v.on_path_ok,
                 {{"player", i}, {"c", v.c}, {"on_path", v.on_path}, {"bound", v.on_path_bound}});
    report.check("player " + std::to_string(i) + " gain <= epsilon", v.gain_ok,
                 {{"player", i}, {"gain", v.gain}, {"best_value", v.best_value}, {"subsets", subsets}});
  }
  report.check("final bound below epsilon", r.final_bound_ok, {{"final_bound", r.final_bound}});
  report.add({{"type", "invariants"},
              {"c_above_minmax", r.c_above_minmax},
              {"y_w_close", r.y_w_close},
              {"k_minmax_low", r.k_minmax_low},
              {"diagnostics_ok", r.diagnostics_ok},
              {"witness", r.witness}});
  if (!g.partition_ok) report.flag("nu fired before theta on " + g.partition_witness);
  if (!r.diagnostics_ok) report.flag("subset diagnostics exceed their bounds");
  if (!p.sigma_hat.plans_hold) report.flag("a punishment plan misses its bound");
  if (g.blame_error.statistical) report.flag("blame error rows are Monte Carlo estimates");
  if (uninformative > 0) report.flag(std::to_string(uninformative) + " exit(s) with tied blame");
  if (game.payoff().declared_shift_invariant) {
    const LiftResult lift = shift_invariant_lift(game, t, p.sigma_hat, 3, opt.seed);
    report.check("shift-invariant lift", lift.check.pass,
                 {{"initial_state", lift.initial_state}, {"pairs", lift.check.pairs}, {"worst", lift.check.worst}});
  }
}

void cmd_zero_sum(const RunConfig& c, const Game& game, Report& report, RunResult&) {
  require_valid(game);
  const ValueTable values = compute_minmax_values(game);
  const ZeroSumTotalReport r = zero_sum_total_check(game, values, tolerance(c));
  report.check("sum of minmax values <= n tol", r.pass,
               {{"sum", r.sum}, {"tolerance", r.tolerance}, {"worst_total", r.worst_total}, {"witness", r.witness}});
  if (!values.certified) report.flag("minmax brackets not certified");
}


void cmd_corpus(const RunConfig& c, Report& report, RunResult& result) {
  const CorpusParams params = corpus_params(c);
  const auto entries = generate_corpus(*c.seed, c.count, params);
  for (const auto& e : entries) {
    const Game game = game_from_json(e.document);
    json rec = {{"type", "game"}, {"name", e.name}, {"seed", e.seed}, {"game_hash", json_hash(game_to_json(game))}};
    if (params.family == CorpusFamily::kZeroSumTotal) {
      const ZeroSumTotalReport z = zero_sum_total_check(game, compute_minmax_values(game), 1e-6);
      rec["worst_total"] = z.worst_total;
      report.check(e.name + " sums to zero", z.worst_total <= 1e-9, {{"worst_total", z.worst_total}});
    }
    report.add(rec);
    result.files.emplace_back(e.name + ".json", e.document.dump(2) + "\n");
  }
  result.files.emplace_back("manifest.json", corpus_manifest(*c.seed, params, entries).dump(2) + "\n");
}

int exit_code_for(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::kInvalid:
    case ErrorClass::kParse: return kExitParse;
    case ErrorClass::kSolver: return kExitSolver;
    case ErrorClass::kAssertion: return kExitAssertion;
    case ErrorClass::kCap: return kExitCap;
  }
  return kExitSolver;
}

const char* class_name(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::kInvalid: return "invalid";
    case ErrorClass::kParse: return "parse";
    case ErrorClass::kSolver: return "solver";
    case ErrorClass::kAssertion: return "assertion";
    case ErrorClass::kCap: return "cap";
  }
  return "?";
}

}  // namespace

CorpusParams corpus_params(const RunConfig& c) {
  CorpusParams p;
  p.min_players = c.min_players;
  p.max_players = c.max_players;
  p.max_states = c.max_states;
  p.max_actions = c.max_actions;
  p.min_horizon = c.min_horizon;
  p.max_horizon = c.max_horizon;
  p.sparse_rows = c.sparse_rows;
  p.family = parse_family(c.family);
  return p;
}

json config_json(const RunConfig& c) {
  json j = {{"subcommand", c.subcommand}, {"epsilon", c.epsilon}, {"rollouts", c.rollouts},
            {"depth", c.depth},           {"tol", tolerance(c)},  {"strict", c.strict}};
  if (!c.mode.empty()) j["mode"] = c.mode;
  if (!c.game_path.empty()) j["game"] = std::filesystem::path(c.game_path).filename().string();
  if (c.delta) j["delta"] = *c.delta;
  if (c.seed) j["seed"] = *c.seed;
  if (c.subcommand == "corpus")
    j["corpus"] = {{"count", c.count},
                   {"family", c.family},
                   {"min_players", c.min_players},
                   {"max_players", c.max_players},
                   {"max_states", c.max_states},
                   {"max_actions", c.max_actions},
                   {"min_horizon", c.min_horizon},
                   {"max_horizon", c.max_horizon},
                   {"sparse_rows", c.sparse_rows}};
  return j;
}

void check_config(const RunConfig& c) {
  if (std::find(std::begin(kSubcommands), std::end(kSubcommands), c.subcommand) == std::end(kSubcommands))
    throw InvalidInputError("unknown subcommand " + c.subcommand);
  if (!(c.epsilon > 0.0 && c.epsilon <= 1.0)) throw InvalidInputError("epsilon must lie in (0, 1]");
  if (c.delta && !(*c.delta > 0.0 && *c.delta < 1.0)) throw InvalidInputError("delta must lie in (0, 1)");
  if (c.rollouts < 0) throw InvalidInputError("rollouts must be nonnegative");
  if (c.depth < 0) throw InvalidInputError("depth must be nonnegative");
  if (c.tol && !(*c.tol >= 0.0)) throw InvalidInputError("tol must be nonnegative");
  if ((c.rollouts > 0 || c.subcommand == "corpus") && !c.seed)
    throw InvalidInputError("--seed is required for stochastic modes");
  if (c.subcommand == "synth" && c.mode != "maxmin" && c.mode != "acceptable")
    throw InvalidInputError("synth needs a mode: maxmin or acceptable");
  if (c.subcommand == "corpus") {
    if (c.count < 0) throw InvalidInputError("count must be nonnegative");
    parse_family(c.family);
  } else if (c.game_path.empty()) {
    throw InvalidInputError("--game is required");
  }
}

RunResult run(const RunConfig& config) {
  RunResult result;
  json cfg;
  try {
    check_config(config);
    cfg = config_json(config);
  } catch (const MartinError& e) {
    result.exit_code = kExitParse;
    result.error = e.what();
    return result;
  }
  std::optional<Game> game;
  try {
    if (config.subcommand == "corpus") {
      result.report.emplace(config.subcommand, cfg, "none");
      cmd_corpus(config, *result.report, result);
    } else {
      game.emplace(load_game(config.game_path));
      result.report.emplace(config.subcommand, cfg, json_hash(game_to_json(*game)));
      Report& r = *result.report;
      const std::string& s = config.subcommand;
      if (s == "validate") cmd_validate(config, *game, r, result);
      else if (s == "values") cmd_values(config, *game, r, result);
      else if (s == "martin") cmd_martin(config, *game, r, result);
      else if (s == "synth") cmd_synth(config, *game, r, result);
      else if (s == "mediate") cmd_mediate(config, *game, r, result);
      else if (s == "solve-subgame") cmd_solve(config, *game, r, result);
      else cmd_zero_sum(config, *game, r, result);
    }
    if (!result.report->pass()) result.exit_code = kExitAssertion;
    else if (config.strict && result.report->flagged()) result.exit_code = kExitAssertion;
  } catch (const MartinError& e) {
    result.exit_code = exit_code_for(e.error_class());
    result.error = e.what();
    json rec = {{"class", class_name(e.error_class())}, {"message", e.what()}};
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
      rec["line"] = p->line;
      rec["column"] = p->column;
    }
    if (const auto* s = dynamic_cast<const SolverError*>(&e)) rec["best_residual"] = s->best_residual;
    if (const auto* k = dynamic_cast<const CapExceededError*>(&e)) rec["count"] = k->count;
    if (!result.report) result.report.emplace(config.subcommand, cfg, "none");
    result.report->error(rec);
  } catch (const std::exception& e) {
    result.exit_code = kExitSolver;
    result.error = e.what();
    if (!result.report) result.report.emplace(config.subcommand, cfg, "none");
    result.report->error({{"class", "internal"}, {"message", e.what()}});
  }
  if (!config.out_dir.empty() && result.report) {
    try {
      result.report->write(config.out_dir);
      for (const auto& [name, text] : result.files)
        write_text((std::filesystem::path(config.out_dir) / name).string(), text);
    } catch (const std::exception& e) {
      result.error = e.what();
      if (result.exit_code == kExitOk) result.exit_code = kExitParse;
    }
  }
  return result;
}

}  // namespace martin_games
