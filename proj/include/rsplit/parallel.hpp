#pragma once

namespace rsplit {

// Caps OpenMP worker threads; no-op in serial builds.  k <= 0 restores the
// hardware default.
void set_thread_cap(int k);

int max_threads();

}  // namespace rsplit
