#pragma once

namespace hypervsa {

// Caps the OpenMP thread pool; n <= 0 leaves the runtime default.
void set_thread_cap(int n);

// Parses HYPERVSA_THREADS, returning 0 when unset or unparsable.
int thread_cap_from_env();

int max_threads();

}  // namespace hypervsa
