#ifndef PLATEFORGE_PARALLEL_HPP
#define PLATEFORGE_PARALLEL_HPP

#include <functional>

namespace plateforge {

// Number of worker threads to use for `tasks` independent jobs. `requested`
// 0 means all cores; the PLATE_FORGE_THREADS environment variable caps the
// result either way.
int effective_threads(int requested, int tasks);

// Runs fn(0..count-1) on up to `threads` workers. Tasks must be independent;
// results should be written to per-index slots so the outcome does not
// depend on scheduling. The first exception thrown by a task is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace plateforge

#endif
