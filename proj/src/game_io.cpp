#include "martin_games/game_io.hpp"

#include <fstream>
#include <sstream>

#include "martin_games/errors.hpp"

namespace martin_games {

using nlohmann::json;

namespace {

std::vector<std::string> names(const json& j, const std::string& what, const std::string& prefix) {
  std::vector<std::string> out;
  if (j.is_number_integer()) {
    const int count = j.get<int>();
    if (count < 0) throw ParseError(what + " count must be nonnegative");
    for (int k = 0; k < count; ++k) out.push_back(prefix + std::to_string(k));
    return out;
  }
  if (!j.is_array()) throw ParseError(what + " must be a count or an array of names");
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError(what + " names must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError("expected a number at " + where);
  return j.get<double>();
}

// [state][profile][player] flattened.
std::vector<double> rewards(const json& j, int states, int profiles, int players) {
  std::vector<double> out;
  if (j.is_null()) return out;
  if (!j.is_array() || static_cast<int>(j.size()) != states)
    throw ParseError("rewards must have one entry per state");
  for (int s = 0; s < states; ++s) {
    const auto& row = j[s];
    if (!row.is_array() || static_cast<int>(row.size()) != profiles)
      throw ParseError("rewards[" + std::to_string(s) + "] must have one entry per action profile");
    for (int a = 0; a < profiles; ++a) {
      const auto& cell = row[a];
      if (!cell.is_array() || static_cast<int>(cell.size()) != players)
        throw ParseError("rewards[" + std::to_string(s) + "][" + std::to_string(a) + "] must have one entry per player");
      for (int i = 0; i < players; ++i) out.push_back(number(cell[i], "rewards"));
    }
  }
  return out;
}

PayoffSpec payoff_from_json(const json& j, int states, int profiles, int players) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ParseError("payoff must be an object with a string \"type\"");
  const std::string type = j["type"].get<std::string>();
  PayoffSpec spec;
  if (type == "finite_horizon") {
    FiniteHorizon fh;
    if (!j.contains("horizon") || !j["horizon"].is_number_integer())
      throw ParseError("finite_horizon payoff needs an integer horizon");
    fh.horizon = j["horizon"].get<int>();
    fh.rewards = rewards(j.value("rewards", json()), states, profiles, players);
    if (j.contains("terminal")) {
      const auto& t = j["terminal"];
      if (!t.is_array() || static_cast<int>(t.size()) != states)
        throw ParseError("terminal must have one entry per state");
      for (const auto& row : t) {
        if (!row.is_array() || static_cast<int>(row.size()) != players)
          throw ParseError("terminal rows must have one entry per player");
        for (const auto& v : row) fh.terminal.push_back(number(v, "terminal"));
      }
    }
    if (j.contains("table")) {
      if (!j["table"].is_object()) throw ParseError("table must map history keys to payoff vectors");
      std::map<std::string, std::vector<double>> table;
      for (const auto& [key, v] : j["table"].items()) {
        if (!v.is_array()) throw ParseError("table entry " + key + " must be an array");
        std::vector<double> row;
        for (const auto& x : v) row.push_back(number(x, "table entry " + key));
        table[key] = std::move(row);
      }
      fh.table = std::move(table);
    }
    spec.kind = std::move(fh);
  } else if (type == "discounted") {
    Discounted d;
    d.discount = number(j.value("discount", json()), "discount");
    d.rewards = rewards(j.value("rewards", json()), states, profiles, players);
    spec.kind = std::move(d);
  } else if (type == "reachability") {
    Reachability r;
    const auto& t = j.value("targets", json());
    if (!t.is_array() || static_cast<int>(t.size()) != players)
      throw ParseError("reachability targets need one array per player");
    for (const auto& row : t) {
      std::vector<StateId> ids;
      for (const auto& s : row) {
        if (!s.is_number_integer()) throw ParseError("target state ids must be integers");
        ids.push_back(s.get<int>());
      }
      r.targets.push_back(std::move(ids));
    }
    spec.kind = std::move(r);
  } else if (type == "mean_payoff") {
    MeanPayoff m;
    m.rewards = rewards(j.value("rewards", json()), states, profiles, players);
    spec.kind = std::move(m);
  } else {
    throw ParseError("unknown payoff type \"" + type + "\"");
  }
  return spec;
}

// Line and column (1-based) of a byte offset.
std::pair<int, int> position(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Game game_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("game document must be a JSON object");
  for (const char* field : {"players", "states", "actions", "transitions", "payoff"})
    if (!doc.contains(field)) throw ParseError(std::string("missing field \"") + field + "\"");
  auto players = names(doc["players"], "players", "p");
  auto states = names(doc["states"], "states", "s");
  const auto& acts = doc["actions"];
  if (!acts.is_array() || acts.size() != players.size())
    throw ParseError("actions must have one entry per player");
  std::vector<std::vector<std::string>> actions;
  int profiles = 1;
  for (const auto& a : acts) {
    actions.push_back(names(a, "actions", "a"));
    profiles *= static_cast<int>(std::max<std::size_t>(1, actions.back().size()));
  }
  const int ns = static_cast<int>(states.size());
  const int n = static_cast<int>(players.size());
  std::vector<double> transitions;
  const auto& tr = doc["transitions"];
  if (!tr.is_array() || static_cast<int>(tr.size()) != ns)
    throw ParseError("transitions must have one entry per state");
  for (int s = 0; s < ns; ++s) {
    if (!tr[s].is_array() || static_cast<int>(tr[s].size()) != profiles)
      throw ParseError("transitions[" + std::to_string(s) + "] must have one row per action profile");
    for (int a = 0; a < profiles; ++a) {
      const auto& row = tr[s][a];
      if (!row.is_array() || static_cast<int>(row.size()) != ns)
        throw ParseError("transition rows must have one entry per state");
      for (const auto& p : row) transitions.push_back(number(p, "transitions"));
    }
  }
  PayoffSpec spec = payoff_from_json(doc["payoff"], ns, profiles, n);
  spec.declared_shift_invariant = doc.value("declared_shift_invariant", false);
  const int initial = doc.value("initial_state", 0);
  if (initial < 0 || initial >= std::max(ns, 1)) throw ParseError("initial_state out of range");
  Game game(std::move(players), std::move(states), std::move(actions), std::move(transitions), std::move(spec),
            initial);
  if (doc.contains("normalization")) {
    const json& nz = doc["normalization"];
    Normalization map;
    try {
      map.offset = nz.at("offset").get<std::vector<double>>();
      map.scale = nz.at("scale").get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ParseError("normalization must hold offset and scale arrays");
    }
    try {
      game = game.with_normalization(std::move(map));
    } catch (const InvalidInputError& e) {
      throw ParseError(std::string("normalization: ") + e.what());
    }
  }
  return game;
}

Game parse_game(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = position(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": " + e.what(),
                     line, col);
  }
  try {
    return game_from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad game document: ") + e.what());
  }
}

Game load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_game(buffer.str());
}

json game_to_json(const Game& game) {
  json doc;
  const int n = game.num_players();
  const int ns = game.num_states();
  doc["players"] = game.player_names();
  doc["states"] = game.state_names();
  doc["actions"] = game.action_names();
  doc["initial_state"] = game.initial_state();
  json tr = json::array();
  for (StateId s = 0; s < ns; ++s) {
    json rows = json::array();
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      const auto row = game.transition_row(s, a);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    tr.push_back(std::move(rows));
  }
  doc["transitions"] = std::move(tr);
  auto rewards_json = [&](const std::vector<double>& z) {
    json out = json::array();
    if (z.empty()) return json();
    for (StateId s = 0; s < ns; ++s) {
      json rows = json::array();
      for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
        std::vector<double> cell(n);
        for (PlayerId i = 0; i < n; ++i) cell[i] = z[(static_cast<std::size_t>(s) * game.num_profiles() + a) * n + i];
        rows.push_back(cell);
      }
      out.push_back(std::move(rows));
    }
    return out;
  };
  json payoff;
  const PayoffSpec& spec = game.payoff();
  if (const auto* fh = spec.finite_horizon()) {
    payoff["type"] = "finite_horizon";
    payoff["horizon"] = fh->horizon;
    if (!fh->rewards.empty()) payoff["rewards"] = rewards_json(fh->rewards);
    if (!fh->terminal.empty()) {
      json t = json::array();
      for (StateId s = 0; s < ns; ++s)
        t.push_back(std::vector<double>(fh->terminal.begin() + s * n, fh->terminal.begin() + (s + 1) * n));
      payoff["terminal"] = std::move(t);
    }
    if (fh->table) payoff["table"] = *fh->table;
  } else if (const auto* d = spec.discounted()) {
    payoff["type"] = "discounted";
    payoff["discount"] = d->discount;
    payoff["rewards"] = rewards_json(d->rewards);
  } else if (const auto* r = spec.reachability()) {
    payoff["type"] = "reachability";
    payoff["targets"] = r->targets;
  } else {
    payoff["type"] = "mean_payoff";
    payoff["rewards"] = rewards_json(spec.mean_payoff()->rewards);
  }
  doc["payoff"] = std::move(payoff);
  doc["declared_shift_invariant"] = spec.declared_shift_invariant;
  doc["normalization"] = {{"offset", game.normalization().offset}, {"scale", game.normalization().scale}};
  return doc;
}

}  // namespace martin_games
