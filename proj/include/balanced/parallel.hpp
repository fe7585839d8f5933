#pragma once

#include <functional>

namespace balanced {

// Worker cap from BALANCED_EMBED_THREADS; 0 or unset means one worker per
// hardware thread.  Read once per process.
int thread_budget();

// Runs work(0) .. work(num_blocks-1), possibly concurrently.  Each block owns
// its output slot, and callers reduce slots in block order afterwards, so
// results do not depend on scheduling or on the worker count.
void parallel_blocks(int num_blocks, const std::function<void(int)>& work);

}  // namespace balanced
