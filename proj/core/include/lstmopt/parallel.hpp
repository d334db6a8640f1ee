#pragma once

#include <cstddef>
#include <functional>

namespace lstmopt {

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
// processed exactly once; callers write results into per-index slots so the
// outcome is independent of scheduling. The first exception thrown by any
// body is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body);

}  // namespace lstmopt
