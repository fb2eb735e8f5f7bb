#pragma once

namespace mlg {

// Applies the MLG_THREADS cap (0 or unset: OpenMP default). Returns the
// resulting worker count. Call once at process start.
int apply_thread_cap_from_env();

int max_threads();
void set_threads(int n);  // n <= 0 restores the hardware default

}  // namespace mlg
