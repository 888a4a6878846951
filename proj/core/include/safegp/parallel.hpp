#pragma once

#include <cstddef>
#include <functional>

namespace safegp {

/// Worker cap: SAFEGP_THREADS if set and positive, else hardware concurrency.
std::size_t thread_limit();

/// Runs body(i) for i in [0, count) on up to thread_limit() threads.
///
/// Indices are handed out dynamically; body must write only to slots owned by
/// its index so results do not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace safegp
