#pragma once

#include <cstddef>
#include <functional>

namespace cremona {

// Worker count: hardware concurrency, capped by CREMONA_KIT_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, n). Results must be written to disjoint slots so
// the outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cremona
