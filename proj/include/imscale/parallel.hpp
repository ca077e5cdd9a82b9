#pragma once

#include <cstddef>
#include <functional>

namespace imscale::parallel {

// Process-wide worker bound. Work is split by index, and outputs are written
// to per-index slots, so results are identical for any budget.
int thread_budget();
void set_thread_budget(int threads);

// Runs fn(begin, end) over a static partition of [0, count).
void for_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace imscale::parallel
