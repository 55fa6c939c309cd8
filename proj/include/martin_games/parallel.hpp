#pragma once

#include <cstddef>
#include <functional>

namespace martin_games {

// Worker count: MARTIN_GAMES_THREADS if set (>= 1), else hardware concurrency.
int worker_count();

// Runs body(k) for k in [begin, end). Each index is handled exactly once; the
// first exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

}  // namespace martin_games
