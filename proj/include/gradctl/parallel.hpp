#pragma once

#include <functional>

namespace gradctl {

// Worker cap: GRADCTL_THREADS if set, else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n). Each index owns its output slot, so results are
// independent of scheduling; callers merge slots in index order to keep
// bit-reproducibility. The first exception thrown by any worker is rethrown.
void parallel_for(long n, const std::function<void(long)>& fn);

} // namespace gradctl
