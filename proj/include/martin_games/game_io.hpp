#pragma once

#include <string>

#include <json.hpp>

#include "martin_games/game.hpp"

namespace martin_games {

// Game document:
//   players: count or array of names; states: count or array of names;
//   actions: per player, a count or an array of names;
//   transitions: [state][profile][next]; payoff: {"type": ..., ...};
//   optional initial_state, declared_shift_invariant.
// Payoff types: finite_horizon {horizon, rewards [state][profile][player],
// terminal [state][player], table {history key: [player]}}, discounted
// {discount, rewards}, reachability {targets [player][state ids]},
// mean_payoff {rewards}.
Game game_from_json(const nlohmann::json& doc);

// Parses text; malformed JSON raises ParseError with line and column.
Game parse_game(const std::string& text);
Game load_game(const std::string& path);

// Document of the game in normalized payoff units, with the normalization
// recorded under "normalization".
nlohmann::json game_to_json(const Game& game);

}  // namespace martin_games
