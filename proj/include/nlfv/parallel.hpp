#pragma once

namespace nlfv {

/// Applies NLFV_THREADS (0 or unset = runtime default) and returns the worker
/// count in effect. Throws ConfigError for malformed values.
int configure_threads();
int thread_count();

}  // namespace nlfv
