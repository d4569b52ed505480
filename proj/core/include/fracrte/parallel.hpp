#pragma once

#include <cstddef>
#include <functional>

namespace fracrte {

// Worker count: FRACRTE_THREADS if set, otherwise hardware concurrency.
int default_thread_count();

// Process-wide override (0 restores the default); used by the CLI --threads flag.
void set_thread_count(int threads);
int thread_count();

// Calls fn(i) for i in [0, n) on up to thread_count() workers. Each index is
// written by exactly one call, so results stored per index are independent
// of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fracrte
