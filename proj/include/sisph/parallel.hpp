#pragma once

#include <cstddef>

namespace sisph {

/// Worker count used by every data-parallel particle loop.
void set_num_threads(int n);
int num_threads();

/// Worker count from the SISPH_THREADS environment variable, or `fallback`.
int threads_from_env(int fallback);

/// Static partition of [0, n) across the workers. Each index is visited once;
/// the body must only write to state owned by that index.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace sisph
