#pragma once

#include <functional>

#include "nullcone/types.hpp"

namespace nullcone {

/// Worker cap: NULLCONE_THREADS when set (>= 1), hardware concurrency
/// otherwise.
int max_threads();

/// Chunked parallel loop over [0, n). The body must write only to disjoint
/// slots so results are independent of the thread count.
void parallel_for(Index n, const std::function<void(Index)>& body);

}  // namespace nullcone
