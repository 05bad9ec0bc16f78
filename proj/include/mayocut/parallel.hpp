#pragma once

namespace mayocut {

// Worker cap for every OpenMP kernel in the library. Initialized from the
// MAYOCUT_THREADS environment variable when set, otherwise the OpenMP
// default. Call with n >= 1 to pin, n = 0 to restore the default.
void set_max_threads(int n);
int max_threads();

}  // namespace mayocut
