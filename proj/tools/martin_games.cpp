#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "martin_games/cli.hpp"

namespace {

using martin_games::RunConfig;

void common_flags(CLI::App* sub, RunConfig& c, bool needs_game) {
  auto* game = sub->add_option("--game", c.game_path, "game file (JSON)");
  if (needs_game) game->required()->check(CLI::ExistingFile);
  sub->add_option("--epsilon", c.epsilon, "epsilon in (0, 1]");
  sub->add_option("--seed", c.seed, "seed (required for stochastic modes)");
  sub->add_option("--rollouts", c.rollouts, "Monte Carlo rollouts (0 = exact)");
  sub->add_option("--depth", c.depth, "depth cap for infinite-horizon classes");
  sub->add_option("--tol", c.tol, "verification tolerance");
  sub->add_option("--out", c.out_dir, "output directory for report.jsonl / report.md");
  sub->add_flag("--strict", c.strict, "fail on flagged uncertified results");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Martin functions, acceptable profiles and solvable subgames for multiplayer stochastic games"};
  app.set_version_flag("--version", martin_games::kToolVersion);
  app.require_subcommand(1);
  RunConfig c;

  common_flags(app.add_subcommand("validate", "check a game file"), c, true);
  common_flags(app.add_subcommand("values", "minmax and maxmin values at every history"), c, true);
  common_flags(app.add_subcommand("martin", "build and certify the Martin function"), c, true);
  auto* synth = app.add_subcommand("synth", "synthesize and verify strategies");
  synth->add_option("mode", c.mode, "maxmin | acceptable")->required()->check(CLI::IsMember({"maxmin", "acceptable"}));
  common_flags(synth, c, true);
  common_flags(app.add_subcommand("mediate", "mediated system and best-deviation gains"), c, true);
  auto* solve = app.add_subcommand("solve-subgame", "solvable-subgame pipeline");
  common_flags(solve, c, true);
  solve->add_option("--delta", c.delta, "override the automatic delta");
  common_flags(app.add_subcommand("check-zero-sum", "sum of minmax values of a zero-sum-total game"), c, true);

  auto* corpus = app.add_subcommand("corpus", "seeded random game corpus");
  common_flags(corpus, c, false);
  corpus->add_option("--count", c.count, "number of games");
  corpus->add_option("--family", c.family, "general | zero-sum-total | shift-invariant | constant");
  corpus->add_option("--min-players", c.min_players);
  corpus->add_option("--max-players", c.max_players);
  corpus->add_option("--max-states", c.max_states);
  corpus->add_option("--max-actions", c.max_actions);
  corpus->add_option("--min-horizon", c.min_horizon);
  corpus->add_option("--max-horizon", c.max_horizon);
  corpus->add_option("--sparse-rows", c.sparse_rows, "probability of a sparse transition row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : martin_games::kExitParse;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  const martin_games::RunResult r = martin_games::run(c);
  if (r.report) std::cout << r.report->markdown();
  if (!r.error.empty()) std::cerr << "error: " << r.error << '\n';
  return r.exit_code;
}
