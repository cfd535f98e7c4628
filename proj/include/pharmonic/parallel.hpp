#ifndef PHARMONIC_PARALLEL_HPP
#define PHARMONIC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace pharmonic {

// Runs body(0..count-1) across worker threads (hardware count by default,
// capped by thread_limit when nonzero).  Results must be written to
// per-index slots; ordering of side effects is then independent of the
// schedule.  The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body,
                  unsigned thread_limit = 0);

}  // namespace pharmonic

#endif  // PHARMONIC_PARALLEL_HPP
