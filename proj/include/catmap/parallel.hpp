#pragma once

#include <cstddef>

// Thin OpenMP layer. Every kernel that uses it has a serial twin in
// namespace catmap::serial that the tests compare against.

namespace catmap {

/// Worker count: CATMAP_THREADS when set and positive, else the OpenMP default.
int thread_cap() noexcept;

/// Applies thread_cap() to the OpenMP runtime. Called once by the CLI.
void configure_threads() noexcept;

}  // namespace catmap
