#include "doctest.h"

#include <cmath>
#include <functional>

#include "builders.hpp"
#include "martin_games/corpus.hpp"
#include "martin_games/detection.hpp"
#include "martin_games/errors.hpp"
#include "martin_games/martin.hpp"
#include "martin_games/oracle.hpp"
#include "martin_games/payoff.hpp"
#include "martin_games/rng.hpp"
#include "martin_games/synth.hpp"

using namespace martin_games;

namespace {

// Random antichain of tree nodes below the root.
TargetSet random_antichain(const Game& game, const HistoryTree& tree, Rng& rng, int picks) {
  std::vector<int> chosen;
  for (int k = 0; k < picks; ++k) {
    const int v = 1 + rng.below(tree.size() - 1);
    bool ok = true;
    for (int u : chosen)
      if (tree.is_ancestor(u, v) || tree.is_ancestor(v, u)) ok = false;
    if (ok) chosen.push_back(v);
  }
  std::vector<History> members;
  for (int v : chosen) members.push_back(tree.history(v));
  return TargetSet(game, members);
}

// Deterministic stopping rule from a hash of the history key.
StopRule hashed_stop(const Game& game, std::uint64_t salt) {
  return [&game, salt](const History& h) {
    const std::string key = game.history_key(h);
    return mix_seed(std::hash<std::string>{}(key) ^ salt) % 4 == 0;
  };
}

// Both sides of the identity from the DFS enumeration oracle and the
// history-based zeta.
std::pair<double, double> identity_by_enumeration(const Game& game, const StrategyProfile& profile, PlayerId i,
                                                  const TargetSet& q, int n, const StopRule& stop) {
  const History root(game.initial_state());
  const EnumerationTable table = enumerate(game, profile, root);
  double lhs = 0.0, rhs = 0.0;
  for (const auto& row : table.rows) {
    int theta = row.history.stage();
    for (int k = 1; k <= row.history.stage(); ++k)
      if (stop(row.history.prefix(k))) {
        theta = k;
        break;
      }
    lhs += row.probability * zeta(game, row.history, i, n, theta, q, profile);
    bool hit = false;
    for (int k = n; k <= theta; ++k)
      if (q.contains(game, row.history.prefix(k))) hit = true;
    rhs += row.probability * (hit ? 1.0 : 0.0);
  }
  return {lhs, rhs};
}

}  // namespace

TEST_CASE("target sets are antichains") {
  const Game game = test_games::leaky_chain(0.3, 0.4, 2);
  const History h(0);
  CHECK_THROWS_AS(TargetSet(game, {h.extended(0, 0), h.extended(0, 0).extended(0, 1)}), InvalidInputError);
  const TargetSet q(game, {h.extended(0, 1), h.extended(0, 0).extended(0, 2)});
  CHECK(q.has_prefix_in(game, h.extended(0, 1).extended(0, 1)));
  CHECK_FALSE(q.has_prefix_in(game, h.extended(0, 0)));
  CHECK(q.entry_stage(game, h.extended(0, 1).extended(0, 1)) == 2);
}

TEST_CASE("lambda and zeta") {
  const Game game = test_games::leaky_chain(0.3, 0.4, 3);
  const History h(0);
  const MixedProfile x = pure_profile(game, 0);
  const TargetSet q(game, {h.extended(0, 1), h.extended(0, 0).extended(0, 2)});
  const StrategyProfile stay(StrategyProfile::Stationary{std::vector<MixedProfile>(3, x)});

  CHECK(lambda(game, h.extended(0, 2), 0, 0, q, x) == 0.0);                // no extension in Q
  CHECK(lambda(game, h.extended(0, 1), 0, 0, q, x) == 0.0);                // h itself in Q
  CHECK(lambda(game, h, 0, 0, q, x) == doctest::Approx(0.3));              // single term
  CHECK(lambda(game, h.extended(0, 0), 1, 0, q, x) == doctest::Approx(0.4));

  const History run = h.extended(0, 0).extended(0, 0).extended(0, 0);
  CHECK(zeta(game, run, 0, 3, 2, q, stay) == 0.0);
  CHECK(zeta(game, run, 0, 2, 3, q, stay) == doctest::Approx(0.7));
  CHECK(zeta(game, run, 0, 2, 2, q, stay) == doctest::Approx(0.3));
  // Monotone in the upper limit.
  for (int l = 2; l < 4; ++l) CHECK(zeta(game, run, 0, 2, l, q, stay) <= zeta(game, run, 0, 2, l + 1, q, stay));
  // Vanishes past an entry into Q.
  const History inside = h.extended(0, 1).extended(0, 1).extended(0, 1);
  CHECK(zeta(game, inside, 0, 3, 4, q, stay) == 0.0);
}

TEST_CASE("zeta identity, trivial sets") {
  const Game game = random_game(3, CorpusParams{});
  const MartinFunction d = martin_finite_horizon(game);
  const StrategyProfile sigma = acceptable_profile(game, d).profile;
  const History root(game.initial_state());
  SUBCASE("empty set") {
    const auto r = verify_zeta_identity(game, sigma, 0, TargetSet(), 2, never_stop(), root);
    CHECK(r.pass);
    CHECK(r.expected_zeta == 0.0);
    CHECK(r.hit_probability == 0.0);
  }
  SUBCASE("every stage-2 history") {
    const HistoryTree tree = full_tree(game);
    std::vector<History> all;
    for (int v = tree.stage_begin(2); v < tree.stage_end(2); ++v) all.push_back(tree.history(v));
    const auto r = verify_zeta_identity(game, sigma, 1, TargetSet(game, all), 2, never_stop(), root);
    CHECK(r.pass);
    CHECK(r.expected_zeta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.hit_probability == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zeta identity on random instances") {
  CorpusParams params;
  params.min_horizon = 2;
  params.max_horizon = 4;
  params.history_cap = 5000;
  Rng rng(2024);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Game game = random_game(300 + seed, params);
    CAPTURE(seed);
    const HistoryTree tree = full_tree(game);
    const MartinFunction d = martin_finite_horizon(game);
    const StrategyProfile sigma = acceptable_profile(game, d).profile;
    const TargetSet q = random_antichain(game, tree, rng, 6);
    const PlayerId i = rng.below(game.num_players());
    const int n = 2 + rng.below(std::max(1, tree.max_stage() - 1));
    const StopRule stop = seed % 2 == 0 ? never_stop() : hashed_stop(game, seed);
    const auto r = verify_zeta_identity(game, sigma, i, q, n, stop, History(game.initial_state()));
    CHECK(r.pass);
    CHECK(r.discrepancy <= 1e-9);
    const auto [lhs, rhs] = identity_by_enumeration(game, sigma, i, q, n, stop);
    CHECK(r.expected_zeta == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(r.hit_probability == doctest::Approx(rhs).epsilon(1e-12));
    // Shrinking the target set cannot increase E[zeta].
    if (q.size() > 1) {
      std::vector<History> fewer(q.members().begin(), q.members().end() - 1);
      const auto s = verify_zeta_identity(game, sigma, i, TargetSet(game, fewer), n, stop,
                                          History(game.initial_state()));
      CHECK(s.expected_zeta <= r.expected_zeta + 1e-12);
    }
  }
}

TEST_CASE("zeta identity in Monte Carlo mode") {
  CorpusParams params;
  params.min_horizon = 4;
  params.max_horizon = 4;
  params.min_players = 2;
  params.max_players = 2;
  const Game game = random_game(77, params);
  const HistoryTree tree = full_tree(game);
  const MartinFunction d = martin_finite_horizon(game);
  const StrategyProfile sigma = acceptable_profile(game, d).profile;
  Rng rng(5);
  const TargetSet q = random_antichain(game, tree, rng, 10);
  const auto r = verify_zeta_identity(game, sigma, 0, q, 2, never_stop(), History(game.initial_state()), 20000, 3);
  CHECK(r.statistical);
  CHECK(r.pass);
  const auto exact = verify_zeta_identity(game, sigma, 0, q, 2, never_stop(), History(game.initial_state()));
  CHECK(std::abs(r.hit_probability - exact.hit_probability) <= 0.02);
}

TEST_CASE("high-minmax sets") {
  SUBCASE("constant game") {
    const Game game = test_games::constant_game(2, 2);
    const ValueTable values = compute_minmax_values(game);
    const History root(0);
    for (PlayerId i = 0; i < 2; ++i) CHECK(high_minmax_set(game, values, root, {0.0, 0.0}, 0.01, i).empty());
  }
  SUBCASE("first crossings on corpus games") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Game game = random_game(seed, CorpusParams{});
      const ValueTable values = compute_minmax_values(game);
      const HistoryTree& tree = *values.tree;
      const int n = game.num_players();
      const History root(game.initial_state());
      std::vector<double> c(n);
      for (PlayerId i = 0; i < n; ++i) c[i] = values.vbar(0, i) - 0.05;
      for (PlayerId i = 0; i < n; ++i) {
        const TargetSet q = high_minmax_set(game, values, root, c, 0.01, i);
        const double thr = c[i] + 0.03;
        for (int v = 0; v < tree.size(); ++v) {
          const History h = tree.history(v);
          bool earlier = false;
          for (int u = v; u != 0;) {
            u = tree.parent(u);
            if (values.vbar(u, i) > thr) earlier = true;
          }
          const bool first = values.vbar(v, i) > thr && !earlier;
          CHECK(q.contains(game, h) == first);
        }
      }
    }
  }
}

TEST_CASE("nu stopping") {
  const Game game = test_games::leaky_chain(0.3, 0.4, 3);
  const History h(0);
  const MixedProfile x = pure_profile(game, 0);
  const std::vector<TargetSet> q = {TargetSet(game, {h.extended(0, 1), h.extended(0, 0).extended(0, 2)}),
                                    TargetSet()};
  DetectionState s = start_detection(2, 2, 0.5);
  observe_stage(s, game, h, 0, q, x);
  CHECK_FALSE(nu_stopping(s, 0).has_value());
  observe_stage(s, game, h.extended(0, 0), 0, q, x);
  CHECK(nu_stopping(s, 0) == 3);
  CHECK(s.zeta[0] == doctest::Approx(0.7));
  CHECK_FALSE(nu_stopping(s, 1).has_value());

  const DetectionState zero = start_detection(2, 4, 0.0);
  CHECK(nu_stopping(zero, 0) == 4);
  const DetectionConfig cfg = make_detection_config(1.0 / 16, 3);
  CHECK(cfg.threshold == doctest::Approx(0.25));
  CHECK(cfg.eta == doctest::Approx(3.0));
}

TEST_CASE("exit sets and stopping at exits") {
  const Game game = test_games::prisoners_dilemma(2);
  auto tree = std::make_shared<const HistoryTree>(full_tree(game));
  std::vector<char> all(tree->size(), 1);
  SUBCASE("K is everything") {
    const ExitSet z = exit_set(tree, 0, all);
    CHECK(z.no_exits);
    CHECK_FALSE(theta_K(z, tree->history(tree->size() - 1)).has_value());
  }
  SUBCASE("one omitted leaf") {
    std::vector<char> k = all;
    const int leaf = tree->size() - 2;
    k[leaf] = 0;
    const ExitSet z = exit_set(tree, 0, k);
    REQUIRE(z.nodes.size() == 1);
    CHECK(z.nodes[0] == leaf);
    CHECK(theta_K(z, tree->history(leaf)) == 3);
  }
  SUBCASE("a full action fan collapses to its parent") {
    std::vector<char> k = all;
    const int h = 2;  // a stage-2 node
    for (int c = tree->children_begin(h); c < tree->children_end(h); ++c) k[c] = 0;
    const ExitSet z = exit_set(tree, 0, k);
    REQUIRE(z.nodes.size() == 1);
    CHECK(z.nodes[0] == h);
    // Every extension of h stops at stage 2.
    for (int c = tree->children_begin(h); c < tree->children_end(h); ++c) CHECK(z.theta(c) == 2);
  }
  SUBCASE("structure on random good sets") {
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<char> k(tree->size(), 0);
      for (int v = 0; v < tree->size(); ++v) k[v] = rng.uniform() < 0.6;
      const ExitSet z = exit_set(tree, 0, k);
      for (int a : z.nodes)
        for (int b : z.nodes)
          if (a != b) CHECK_FALSE(tree->is_ancestor(a, b));
      // No node has its whole fan in Z.
      for (int v = 0; v < tree->size(); ++v) {
        if (tree->is_leaf(v)) continue;
        bool fan = true;
        for (int c = tree->children_begin(v); c < tree->children_end(v); ++c) fan = fan && z.in_z[c];
        CHECK_FALSE(fan);
      }
      // Leaves outside K are exactly those with a prefix in Z.
      for (int v = tree->stage_begin(3); v < tree->stage_end(3); ++v) CHECK(z.theta(v).has_value() == !k[v]);
    }
  }
}

TEST_CASE("blame") {
  const Game game = test_games::prisoners_dilemma(2);
  auto tree = std::make_shared<const HistoryTree>(full_tree(game));
  // sigma*: always cooperate.
  std::vector<MixedProfile> policy(tree->size());
  for (int v = 0; v < tree->size(); ++v)
    if (!tree->is_leaf(v)) policy[v] = pure_profile(game, 0);
  const ProfileIndex cc = 0, cd = 1;
  std::vector<char> k(tree->size(), 1);
  // K drops every history where player 1 defects in round 1.
  const int bad = tree->child_begin(0, cd);
  for (int c = tree->children_begin(bad); c < tree->children_end(bad); ++c) k[c] = 0;
  // ... and one compliant history.
  const int good = tree->child_begin(0, cc);
  k[tree->child_begin(good, cc)] = 0;
  const ExitSet z = exit_set(tree, 0, k);
  REQUIRE(z.nodes.size() == 2);
  const BlameFunction g = min_likelihood_blame(z, policy);
  CHECK(g.at(z, bad) == 1);
  CHECK_FALSE(g.uninformative[g.position.at(bad)]);
  const int compliant = tree->child_begin(good, cc);
  CHECK(g.at(z, compliant) == 0);
  CHECK(g.uninformative[g.position.at(compliant)]);

  const BlameErrorReport rep = measure_blame_error(z, g, policy, 0.5);
  // Player 0 reaches the defect exit only through player 1, and the tied exit is
  // charged to player 0 itself.
  CHECK(rep.worst_case[0] == 0.0);
  // The tied exit lies on the compliant path, so player 1 is wrongly spared there.
  CHECK(rep.worst_case[1] == doctest::Approx(1.0));
  CHECK_FALSE(rep.within_eta);
  for (const auto& row : rep.rows) {
    CHECK(row.rate <= rep.worst_case[row.player] + 1e-12);
    if (row.player == 1 && row.deviation == "uniform") CHECK(row.rate == doctest::Approx(0.25));
  }

  // Without the tied exit only defections reach Z, and they are blamed correctly.
  std::vector<char> k2(tree->size(), 1);
  for (int c = tree->children_begin(bad); c < tree->children_end(bad); ++c) k2[c] = 0;
  const ExitSet z2 = exit_set(tree, 0, k2);
  const BlameFunction g2 = min_likelihood_blame(z2, policy);
  const BlameErrorReport rep2 = measure_blame_error(z2, g2, policy, 0.5);
  CHECK(rep2.within_eta);
  for (double w : rep2.worst_case) CHECK(w == 0.0);

  const ExitSet none = exit_set(tree, 0, std::vector<char>(tree->size(), 1));
  const BlameErrorReport empty = measure_blame_error(none, min_likelihood_blame(none, policy), policy, 0.5);
  for (const auto& row : empty.rows) CHECK(row.rate == 0.0);

  const BlameErrorReport mc = measure_blame_error(z2, g2, policy, 0.5, 2000, 4);
  CHECK(mc.statistical);
  for (const auto& row : mc.rows) CHECK(row.rate == 0.0);
  const BlameErrorReport mc1 = measure_blame_error(z, g, policy, 0.5, 2000, 4);
  for (const auto& row : mc1.rows)
    if (row.player == 1 && row.deviation == "follow") CHECK(row.rate == 1.0);
}
