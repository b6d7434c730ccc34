#pragma once

#include <functional>

namespace qcauchy {

// Worker cap: min(hardware_concurrency, QCAUCHY_THREADS if set). At least 1.
int max_threads();

// Runs fn(i) for i in [0, n); iterations must be independent. Results are
// identical for any thread count since each index writes its own slot.
void parallel_for(long n, const std::function<void(long)>& fn);

}  // namespace qcauchy
