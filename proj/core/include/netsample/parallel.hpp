#pragma once

#include <cstddef>
#include <functional>

namespace netsample {

/// Runs fn(0..count-1) on up to `workers` threads. Tasks must write only to
/// their own slot; the first exception thrown is rethrown after all workers
/// stop. workers <= 1 runs inline.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace netsample
