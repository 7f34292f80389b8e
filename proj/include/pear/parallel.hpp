// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace pear {

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// handled exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// body is rethrown on the calling thread.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

// Default worker count: hardware concurrency, at least 1.
std::size_t default_workers();

}  // namespace pear
