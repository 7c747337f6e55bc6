#pragma once

#include <functional>

namespace kpist {

// Worker count from KPIST_WORKERS (default: hardware concurrency, at least 1).
// It only changes scheduling: every index is computed by the same code path
// and writes its own output slot, so results never depend on it.
int worker_count();

// Runs body(i) for i in [0, n) over contiguous static chunks.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace kpist
