#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sisph/simd/loops.hpp"

namespace sisph::simd {

namespace {

Backend detect() {
  if (const char* env = std::getenv("SISPH_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && backend_available(Backend::avx2)) return Backend::avx2;
  }
  return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

Backend& current() {
  static Backend b = detect();
  return b;
}

}  // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
  return avx2_loops() != nullptr && cpu_supports_avx2();
}

Backend active_backend() { return current(); }

void set_backend(Backend b) {
  if (!backend_available(b)) throw std::invalid_argument("SIMD backend not available: " + std::string(name(b)));
  current() = b;
}

const LoopTable& loops() {
  if (current() == Backend::avx2) return *avx2_loops();
  return scalar_loops();
}

std::string_view name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

#if !defined(SISPH_HAVE_AVX2)
const LoopTable* avx2_loops() { return nullptr; }
#endif

}  // namespace sisph::simd
