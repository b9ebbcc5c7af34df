#pragma once

#include <cstddef>
#include <functional>

namespace fplb {

/// How independent replays are scheduled. `serial` is the reference path the
/// tests compare the OpenMP path against.
enum class Execution { serial, parallel };

/// Runs body(i) for i in [0, count). Iterations must not share mutable state.
/// The first exception thrown by any iteration is rethrown after the loop.
void for_each_index(std::size_t count, Execution exec, const std::function<void(std::size_t)>& body);

/// Number of OpenMP threads available to the parallel path (1 without OpenMP).
int worker_threads();

}  // namespace fplb
