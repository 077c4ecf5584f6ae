#ifndef EEGL_PARALLEL_H_
#define EEGL_PARALLEL_H_

#include <functional>

namespace eegl {

// Process-wide worker count; 1 runs everything inline.
void set_num_threads(int n);
int num_threads();

// Calls fn(i) for i in [0, n) over a static block partition. Callers write
// into per-index slots, so results never depend on scheduling. The first
// exception (lowest block) is rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace eegl

#endif  // EEGL_PARALLEL_H_
