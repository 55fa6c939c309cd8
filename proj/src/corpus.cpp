#include "martin_games/corpus.hpp"

#include <cmath>

#include "martin_games/errors.hpp"
#include "martin_games/game_io.hpp"
#include "martin_games/rng.hpp"

namespace martin_games {

using nlohmann::json;

const char* family_name(CorpusFamily f) {
  switch (f) {
    case CorpusFamily::kGeneral: return "general";
    case CorpusFamily::kZeroSumTotal: return "zero-sum-total";
    case CorpusFamily::kShiftInvariant: return "shift-invariant";
    case CorpusFamily::kConstant: return "constant";
  }
  return "?";
}

CorpusFamily parse_family(const std::string& name) {
  for (CorpusFamily f : {CorpusFamily::kGeneral, CorpusFamily::kZeroSumTotal, CorpusFamily::kShiftInvariant,
                         CorpusFamily::kConstant})
    if (name == family_name(f)) return f;
  throw InvalidInputError("unknown corpus family " + name);
}

namespace {

// Rounded to 1e-6 so documents print compactly and reload exactly.
double draw(Rng& rng, double lo, double hi) {
  return std::round(rng.uniform(lo, hi) * 1e6) / 1e6;
}

std::vector<double> transition_row(Rng& rng, int states, bool sparse) {
  std::vector<double> row(states, 0.0);
  if (states == 1) {
    row[0] = 1.0;
    return row;
  }
  std::vector<int> support;
  if (sparse) {
    const int size = 1 + rng.below(states);
    std::vector<int> all(states);
    for (int s = 0; s < states; ++s) all[s] = s;
    for (int k = 0; k < size; ++k) {
      const int pick = k + rng.below(states - k);
      std::swap(all[k], all[pick]);
      support.push_back(all[k]);
    }
  } else {
    for (int s = 0; s < states; ++s) support.push_back(s);
  }
  // Integer weights keep the row sum exact in binary after division by a power of two.
  std::vector<int> weights;
  int total = 0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    weights.push_back(1 + rng.below(7));
    total += weights.back();
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < support.size(); ++k) {
    row[support[k]] = static_cast<double>(weights[k]) / total;
    sum += row[support[k]];
  }
  row[support.back()] = 1.0 - sum;
  return row;
}

}  // namespace

json random_game_json(std::uint64_t seed, const CorpusParams& p) {
  Rng rng(seed);
  const int n = p.min_players + rng.below(p.max_players - p.min_players + 1);
  const int ns = 1 + rng.below(p.max_states);
  std::vector<int> actions(n);
  int profiles = 1;
  for (int i = 0; i < n; ++i) {
    actions[i] = 1 + rng.below(p.max_actions);
    // Keep at least two players with a real choice when possible.
    if (i < 2 && p.max_actions >= 2) actions[i] = 2;
    profiles *= actions[i];
  }
  int horizon = p.min_horizon + rng.below(p.max_horizon - p.min_horizon + 1);
  while (horizon > 1 && std::pow(static_cast<double>(profiles) * ns, horizon) > p.history_cap) --horizon;

  json doc;
  doc["players"] = n;
  doc["states"] = ns;
  doc["actions"] = actions;
  json tr = json::array();
  for (int s = 0; s < ns; ++s) {
    json rows = json::array();
    for (int a = 0; a < profiles; ++a) rows.push_back(transition_row(rng, ns, rng.uniform() < p.sparse_rows));
    tr.push_back(std::move(rows));
  }
  doc["transitions"] = std::move(tr);

  auto vector_for = [&](bool zero_sum) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] = draw(rng, -1.0, 1.0);
      if (zero_sum && i + 1 == n) v[i] = -sum;
      sum += v[i];
    }
    return v;
  };

  json payoff;
  payoff["type"] = "finite_horizon";
  payoff["horizon"] = horizon;
  switch (p.family) {
    case CorpusFamily::kConstant: {
      payoff["terminal"] = json::array();
      const auto c = vector_for(false);
      for (int s = 0; s < ns; ++s) payoff["terminal"].push_back(c);
      break;
    }
    case CorpusFamily::kShiftInvariant: {
      payoff["terminal"] = json::array();
      for (int s = 0; s < ns; ++s) payoff["terminal"].push_back(vector_for(false));
      doc["declared_shift_invariant"] = true;
      break;
    }
    case CorpusFamily::kGeneral:
    case CorpusFamily::kZeroSumTotal: {
      const bool zs = p.family == CorpusFamily::kZeroSumTotal;
      json z = json::array();
      for (int s = 0; s < ns; ++s) {
        json rows = json::array();
        for (int a = 0; a < profiles; ++a) {
          auto v = vector_for(zs);
          for (double& x : v) x *= 0.5;
          rows.push_back(v);
        }
        z.push_back(std::move(rows));
      }
      payoff["rewards"] = std::move(z);
      payoff["terminal"] = json::array();
      for (int s = 0; s < ns; ++s) payoff["terminal"].push_back(vector_for(zs));
      break;
    }
  }
  doc["payoff"] = std::move(payoff);
  return doc;
}

Game random_game(std::uint64_t seed, const CorpusParams& params) {
  return game_from_json(random_game_json(seed, params));
}

std::vector<CorpusEntry> generate_corpus(std::uint64_t seed, int count, const CorpusParams& params) {
  if (count < 0) throw InvalidInputError("corpus count must be nonnegative");
  std::vector<CorpusEntry> out;
  for (int k = 0; k < count; ++k) {
    CorpusEntry e;
    e.seed = derive_seed(seed, static_cast<std::uint64_t>(k));
    char name[32];
    std::snprintf(name, sizeof name, "game_%04d", k);
    e.name = name;
    e.document = random_game_json(e.seed, params);
    out.push_back(std::move(e));
  }
  return out;
}

json corpus_manifest(std::uint64_t seed, const CorpusParams& p, const std::vector<CorpusEntry>& entries) {
  json m;
  m["seed"] = seed;
  m["family"] = family_name(p.family);
  m["params"] = {{"min_players", p.min_players}, {"max_players", p.max_players},
                 {"max_states", p.max_states},   {"max_actions", p.max_actions},
                 {"min_horizon", p.min_horizon}, {"max_horizon", p.max_horizon},
                 {"sparse_rows", p.sparse_rows}, {"history_cap", p.history_cap}};
  m["games"] = json::array();
  for (const auto& e : entries) m["games"].push_back({{"name", e.name}, {"seed", e.seed}, {"file", e.name + ".json"}});
  return m;
}

}  // namespace martin_games
