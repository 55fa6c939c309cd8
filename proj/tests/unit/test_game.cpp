#include "doctest.h"

#include <cmath>

#include "builders.hpp"
#include "martin_games/corpus.hpp"
#include "martin_games/errors.hpp"
#include "martin_games/game_io.hpp"
#include "martin_games/oracle.hpp"
#include "martin_games/payoff.hpp"
#include "martin_games/rng.hpp"
#include "martin_games/strategy.hpp"
#include "martin_games/tree.hpp"
#include "martin_games/values.hpp"

using namespace martin_games;

namespace {

bool has_violation(const ValidationReport& r, const std::string& kind) {
  for (const auto& v : r.violations)
    if (v.kind == kind) return true;
  return false;
}

StrategyProfile uniform_stationary(const Game& game) {
  MixedProfile x;
  for (PlayerId i = 0; i < game.num_players(); ++i) x.push_back(uniform_action(game.num_actions(i)));
  return StrategyProfile(StrategyProfile::Stationary{std::vector<MixedProfile>(game.num_states(), x)});
}

// Two states; from state 0 every profile moves to 0 or 1 with equal odds, except
// profile 3 which stays put. State 1 is absorbing.
Game split_game(PayoffSpec spec) {
  std::vector<double> tr;
  for (int a = 0; a < 4; ++a) {
    if (a == 3) tr.insert(tr.end(), {1.0, 0.0});
    else tr.insert(tr.end(), {0.5, 0.5});
  }
  for (int a = 0; a < 4; ++a) tr.insert(tr.end(), {0.0, 1.0});
  return Game::make(2, 2, {2, 2}, tr, std::move(spec));
}

}  // namespace

TEST_CASE("validation") {
  SUBCASE("row sum") {
    const Game g = Game::make(2, 2, {1, 1}, {0.5, 0.49, 0.0, 1.0}, PayoffSpec{FiniteHorizon{}});
    CHECK(has_violation(validate_game(g), "row sum"));
    CHECK_THROWS_AS(require_valid(g), InvalidInputError);
  }
  SUBCASE("minimal valid game") {
    const Game g = Game::make(2, 1, {1, 1}, {1.0}, PayoffSpec{FiniteHorizon{}});
    CHECK(validate_game(g).ok());
  }
  SUBCASE("unknown reachability target") {
    Reachability r;
    r.targets = {{0}, {7}};
    const Game g = Game::make(2, 1, {1, 1}, {1.0}, PayoffSpec{r});
    CHECK(has_violation(validate_game(g), "unknown state"));
  }
  SUBCASE("negative probability") {
    const Game g = Game::make(2, 2, {1, 1}, {1.5, -0.5, 0.0, 1.0}, PayoffSpec{FiniteHorizon{}});
    CHECK_FALSE(validate_game(g).ok());
  }
}

TEST_CASE("histories") {
  const Game pd = test_games::prisoners_dilemma(3);
  CHECK(histories_up_to(pd, 0, 2).size() == 5);
  CHECK(histories_up_to(pd, 0, 1).size() == 1);
  CHECK(histories_up_to(pd, 0, 3).size() == 21);
  CHECK_THROWS_AS(histories_up_to(pd, 0, 3, 10), CapExceededError);

  SUBCASE("zero-probability transitions never appear") {
    const Game g = split_game(PayoffSpec{FiniteHorizon{}});
    for (const History& h : histories_up_to(g, 0, 4))
      for (int k = 0; k + 1 < h.stage(); ++k) CHECK(g.transition(h.states[k], h.profiles[k], h.states[k + 1]) > 0.0);
    // Profile 3 from state 0 never reaches state 1.
    for (const History& h : histories_up_to(g, 0, 2))
      if (h.stage() == 2 && h.profiles[0] == 3) CHECK(h.states[1] == 0);
  }
  SUBCASE("prefix closure") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Game g = random_game(seed, CorpusParams{});
      const auto deep = histories_up_to(g, g.initial_state(), 3);
      const auto shallow = histories_up_to(g, g.initial_state(), 2);
      std::vector<History> cut;
      for (const auto& h : deep)
        if (h.stage() <= 2) cut.push_back(h);
      CHECK(cut == shallow);
    }
  }
  SUBCASE("history keys round trip") {
    for (const History& h : histories_up_to(pd, 0, 3)) CHECK(pd.parse_history_key(pd.history_key(h)) == h);
    const History h = History(0).extended(pd.encode(std::vector<ActionId>{1, 0}), 0);
    CHECK(pd.history_key(h) == "0/1,0/0");
  }
}

TEST_CASE("payoff evaluation") {
  SUBCASE("terminal-only finite horizon") {
    FiniteHorizon fh;
    fh.horizon = 1;
    fh.terminal = {0.7, 0.7};
    const Game g = Game::make(2, 1, {1, 1}, {1.0}, PayoffSpec{fh});
    const auto f = payoff_eval(g, History(0).extended(0, 0), EvalMode::kExact);
    CHECK(f[0] == doctest::Approx(0.7));
    CHECK(g.normalization().denormalize(1, f[1]) == doctest::Approx(0.7));
  }
  SUBCASE("reachability hit at stage 2") {
    Reachability r;
    r.targets = {{1}, {1}};
    const Game g = split_game(PayoffSpec{r});
    const History h = History(0).extended(0, 1);
    const auto f = payoff_eval(g, h, EvalMode::kExact);
    CHECK(f[0] == 1.0);
    CHECK(payoff_eval(g, h.extended(0, 1), EvalMode::kExact)[1] == 1.0);
  }
  SUBCASE("mean payoff, constant reward") {
    MeanPayoff m;
    m.rewards = std::vector<double>(4 * 2, 0.3);
    const Game g = Game::make(2, 1, {2, 2}, {1.0, 1.0, 1.0, 1.0}, PayoffSpec{m});
    History h(0);
    for (int k = 1; k < 100; ++k) h = h.extended(k % 4, 0);
    CHECK(payoff_eval(g, h, EvalMode::kTruncated)[0] == doctest::Approx(0.3));
    CHECK_THROWS_AS(payoff_eval(g, h, EvalMode::kExact), UnsupportedError);
  }
  SUBCASE("stage rewards add up") {
    const Game pd = test_games::prisoners_dilemma(2);
    const auto& nz = pd.normalization();
    const History h = History(0).extended(0, 0).extended(3, 0);  // CC then DD
    const auto f = payoff_eval(pd, h, EvalMode::kExact);
    CHECK(nz.denormalize(0, f[0]) == doctest::Approx(4.0));
    CHECK(f[0] >= 0.0);
    CHECK(f[0] <= 1.0);
  }
}

TEST_CASE("expected payoff") {
  SUBCASE("point mass") {
    const Game pd = test_games::prisoners_dilemma(2);
    const StrategyProfile always_d(StrategyProfile::Stationary{{pure_profile(pd, 3)}});
    const auto e = expected_payoff(pd, always_d, History(0));
    const auto f = payoff_eval(pd, History(0).extended(3, 0).extended(3, 0), EvalMode::kExact);
    CHECK(e[0] == doctest::Approx(f[0]).epsilon(1e-12));
  }
  SUBCASE("uniform play on an explicit table") {
    FiniteHorizon fh;
    fh.horizon = 1;
    fh.table = std::map<std::string, std::vector<double>>{
        {"0/0,0/0", {0.1, 0.9}}, {"0/0,1/0", {0.2, 0.3}}, {"0/1,0/0", {0.4, 0.0}}, {"0/1,1/0", {0.8, 0.5}}};
    const Game g = Game::make(2, 1, {2, 2}, {1.0, 1.0, 1.0, 1.0}, PayoffSpec{fh});
    CHECK(validate_game(g).ok());
    const auto e = expected_payoff(g, uniform_stationary(g), History(0));
    CHECK(e[0] == doctest::Approx((0.1 + 0.2 + 0.4 + 0.8) / 4).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx((0.9 + 0.3 + 0.0 + 0.5) / 4).epsilon(1e-12));
  }
  SUBCASE("Monte Carlo within 3 standard errors") {
    CorpusParams p;
    p.min_horizon = p.max_horizon = 3;
    const Game g = random_game(42, p);
    const StrategyProfile u = uniform_stationary(g);
    const auto exact = expected_payoff(g, u, History(g.initial_state()));
    const auto mc = expected_payoff_mc(g, u, History(g.initial_state()), 100000, 17);
    for (PlayerId i = 0; i < g.num_players(); ++i)
      CHECK(std::abs(mc.mean[i] - exact[i]) <= 3 * mc.standard_error[i]);
    const auto again = expected_payoff_mc(g, u, History(g.initial_state()), 100000, 17);
    CHECK(again.mean == mc.mean);
  }
  SUBCASE("undefined strategy names the history") {
    const Game pd = test_games::prisoners_dilemma(3);
    auto shallow = std::make_shared<const HistoryTree>(pd, History(0), 2);
    std::vector<MixedProfile> table(shallow->size(), pure_profile(pd, 0));
    const StrategyProfile partial(StrategyProfile::Tabular{shallow, table});
    try {
      expected_payoff(pd, partial, History(0));
      FAIL("expected an incomplete-strategy error");
    } catch (const IncompleteStrategyError& e) {
      CHECK(e.history.find('/') != std::string::npos);
    }
  }
  SUBCASE("multilinear in one history's mixed action") {
    Rng rng(8);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Game g = random_game(seed, CorpusParams{});
      const HistoryTree tree = full_tree(g);
      std::vector<MixedProfile> policy(tree.size());
      auto random_mix = [&](int k) {
        MixedAction x(k);
        double s = 0;
        for (auto& v : x) s += (v = rng.uniform() + 0.01);
        for (auto& v : x) v /= s;
        return x;
      };
      for (int v = 0; v < tree.size(); ++v)
        if (!tree.is_leaf(v))
          for (PlayerId i = 0; i < g.num_players(); ++i) policy[v].push_back(random_mix(g.num_actions(i)));
      const int node = tree.is_leaf(1) ? 0 : 1;
      const MixedAction x = random_mix(g.num_actions(0)), y = random_mix(g.num_actions(0));
      for (double t : {0.2, 0.5, 0.9}) {
        auto eval = [&](const MixedAction& a) {
          auto p = policy;
          p[node][0] = a;
          return evaluate_all(tree, p);
        };
        MixedAction mix(x.size());
        for (std::size_t a = 0; a < x.size(); ++a) mix[a] = t * x[a] + (1 - t) * y[a];
        const auto em = eval(mix), ex = eval(x), ey = eval(y);
        for (PlayerId i = 0; i < g.num_players(); ++i)
          CHECK(em[i] == doctest::Approx(t * ex[i] + (1 - t) * ey[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("subgame views") {
  const Game pd = test_games::prisoners_dilemma(2);
  SUBCASE("empty prefix") {
    const Game view = subgame_view(pd, History(0));
    for (const History& h : histories_up_to(pd, 0, 3))
      if (h.stage() == 3)
        CHECK(payoff_eval(view, h, EvalMode::kExact)[0] == doctest::Approx(payoff_eval(pd, h, EvalMode::kExact)[0]));
  }
  SUBCASE("remaining horizon") {
    const Game view = subgame_view(pd, History(0).extended(0, 0));
    CHECK(view.payoff().finite_horizon()->horizon == 1);
    CHECK_FALSE(is_degenerate_view(view));
  }
  SUBCASE("folded prefix reward") {
    FiniteHorizon fh;
    fh.horizon = 2;
    // Reward 0.4 for profile 0 at state 0; state 1 pays nothing.
    fh.rewards = {0.4, 0.4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    const Game g = Game::make(2, 2, {2, 2}, {0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, PayoffSpec{fh});
    const Game view = subgame_view(g, History(0).extended(0, 1));
    for (ProfileIndex a = 0; a < 4; ++a)
      CHECK(payoff_eval(view, History(1).extended(a, 1), EvalMode::kExact)[0] == doctest::Approx(0.4));
  }
  SUBCASE("past the horizon") {
    const History full = History(0).extended(0, 0).extended(0, 0);
    CHECK_FALSE(is_degenerate_view(subgame_view(pd, full)));
    const Game view = subgame_view(pd, full.extended(3, 0));
    CHECK(is_degenerate_view(view));
    CHECK(payoff_eval(view, History(0).extended(3, 0), EvalMode::kExact)[0] ==
          doctest::Approx(payoff_eval(pd, full, EvalMode::kExact)[0]));
  }
  SUBCASE("views compose") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      CorpusParams p;
      p.min_horizon = p.max_horizon = 3;
      const Game g = random_game(seed, p);
      const auto hs = histories_up_to(g, g.initial_state(), 4);
      for (const History& h : hs) {
        if (h.stage() != 2) continue;
        const Game vh = subgame_view(g, h);
        for (const History& r : hs) {
          if (r.stage() != 4 || !h.is_prefix_of(r)) continue;
          const History tail = r.prefix(4);
          // h' = one more round after h; view at h h' against view-at-h then view-at-h'.
          History hp(h.last_state());
          hp = hp.extended(tail.profiles[1], tail.states[2]);
          const Game direct = subgame_view(g, h.concat(hp));
          const Game nested = subgame_view(vh, hp);
          History rest(tail.states[2]);
          rest = rest.extended(tail.profiles[2], tail.states[3]);
          const auto a = payoff_eval(direct, rest, EvalMode::kExact);
          const auto b = payoff_eval(nested, rest, EvalMode::kExact);
          for (PlayerId i = 0; i < g.num_players(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
        }
        break;
      }
    }
  }
}

TEST_CASE("sampling") {
  const Game pd = test_games::prisoners_dilemma(3);
  const StrategyProfile cc(StrategyProfile::Stationary{{pure_profile(pd, 0)}});
  CHECK(sample_run(pd, cc, History(0), 3, 1) == History(0).extended(0, 0).extended(0, 0).extended(0, 0));

  CorpusParams p;
  p.sparse_rows = 0.0;
  const Game g = random_game(11, p);
  const StrategyProfile u = uniform_stationary(g);
  CHECK(sample_run(g, u, History(g.initial_state()), 3, 5) == sample_run(g, u, History(g.initial_state()), 3, 5));

  // Stage-2 state frequencies under a fixed first profile.
  const StrategyProfile fixed(StrategyProfile::Stationary{std::vector<MixedProfile>(g.num_states(), pure_profile(g, 0))});
  const int samples = 100000;
  std::vector<int> counts(g.num_states(), 0);
  for (int k = 0; k < samples; ++k)
    ++counts[sample_run(g, fixed, History(g.initial_state()), 1, derive_seed(99, k)).states[1]];
  for (StateId s = 0; s < g.num_states(); ++s) {
    const double q = g.transition(g.initial_state(), 0, s);
    const double se = std::sqrt(q * (1 - q) / samples);
    CHECK(std::abs(counts[s] / static_cast<double>(samples) - q) <= 3 * se + 1e-12);
  }
}

TEST_CASE("game files") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Game g = random_game(seed, CorpusParams{});
    const Game back = game_from_json(game_to_json(g));
    CHECK(game_to_json(back) == game_to_json(g));
    for (PlayerId i = 0; i < g.num_players(); ++i) CHECK(back.normalization().scale[i] == g.normalization().scale[i]);
  }
  // Raw payoffs outside [0, 1] cannot carry a normalization record.
  nlohmann::json raw = random_game_json(3, CorpusParams{});
  const std::size_t n = random_game(3, CorpusParams{}).num_players();
  raw["normalization"] = {{"offset", std::vector<double>(n, 0.0)}, {"scale", std::vector<double>(n, 1.0)}};
  CHECK_THROWS_AS(game_from_json(raw), ParseError);
  CHECK_THROWS_AS(parse_game("{\"players\": 2,\n \"states\": }"), ParseError);
  try {
    parse_game("{\n\"players\": 2,\n]");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_game(R"({"players": 2, "states": 1, "actions": [1, 1], "transitions": [[[1.0]]],
                                  "payoff": {"type": "bogus"}})"),
                  ParseError);
}

TEST_CASE("value ordering") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Game g = random_game(seed, CorpusParams{});
    const ValueTable t = compute_values(g);
    for (int v = 0; v < t.tree->size(); ++v)
      for (PlayerId i = 0; i < g.num_players(); ++i) CHECK(t.vlow(v, i) <= t.vbar(v, i) + 1e-9);
  }
}
