#pragma once

#include <cstddef>
#include <functional>

namespace wavetrans {

/// Worker cap: min(hardware_concurrency, WAVETRANS_THREADS when set).
int thread_budget();

/// Runs fn(i) for i in [0, n) on up to thread_budget() workers. Work is
/// dealt in fixed index blocks so any per-index output slots are filled
/// deterministically regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wavetrans
