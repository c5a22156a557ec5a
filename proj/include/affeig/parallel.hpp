#pragma once

#include <cstddef>
#include <functional>

namespace affeig {

// Worker count used by parallel_for. Defaults to AFFEIG_THREADS or 1.
int thread_count();
void set_thread_count(int n);

// Runs body(begin, end) over disjoint chunks of [0, n). Each index is visited once;
// callers write only to per-index outputs so results never depend on the split.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 256);

}  // namespace affeig
