#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace paris {

/// How per-particle loops are executed. Both produce bit-identical output;
/// Serial is the reference path kept for tests and benchmarks.
enum class Execution { Serial, Parallel };

/// Number of worker threads used by Parallel loops. Honors PARIS_THREADS
/// (capped at hardware parallelism) unless overridden by set_thread_count.
int thread_count();
void set_thread_count(int threads);

/// Runs body(i) for i in [0, n). In Parallel mode the loop is distributed with
/// OpenMP; if any iteration throws, the exception from the lowest failing index
/// is rethrown after the loop so error reporting is deterministic.
void for_each_index(std::size_t n, Execution exec, const std::function<void(std::size_t)>& body);

}  // namespace paris
