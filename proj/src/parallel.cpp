#include "sisph/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace sisph {

void set_num_threads(int n) { omp_set_num_threads(n > 0 ? n : 1); }

int num_threads() { return omp_get_max_threads(); }

int threads_from_env(int fallback) {
  if (const char* s = std::getenv("SISPH_THREADS")) {
    try {
      const int n = std::stoi(s);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return fallback;
}

}  // namespace sisph
