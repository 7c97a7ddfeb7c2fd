#pragma once

#include <cstddef>
#include <functional>

namespace phaseless {

/// Caps the worker count used by parallel_for. 0 restores the default
/// (PHASELESS_HELM_THREADS if set, else hardware concurrency).
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() workers.
/// Each index is processed exactly once; results must be written to
/// per-index slots so the outcome is independent of scheduling. The first
/// exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace phaseless
