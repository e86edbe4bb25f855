#include <cstdlib>
#include <cstring>

#include "aeqr/la/kernels.hpp"

namespace aeqr::la::kernels {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const Ops& resolve() {
  const char* env = std::getenv("AEQR_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return scalar_ops();
    if (std::strcmp(env, "avx2") == 0 && cpu_supports_avx2())
      return avx2_ops();
    // anything else (including "auto") falls through to detection
  }
  return cpu_supports_avx2() ? avx2_ops() : scalar_ops();
}

}  // namespace

const Ops& ops() {
  static const Ops& selected = resolve();
  return selected;
}

}  // namespace aeqr::la::kernels
