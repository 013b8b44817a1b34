#include <cstdlib>
#include <cstring>

#include "levy/kernels.hpp"

namespace levy::kernels {

#if defined(LEVY_HAVE_AVX2)
const Table* avx2_table_impl();
#endif

const Table* avx2_table() {
#if defined(LEVY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table* chosen = [] {
    const char* env = std::getenv("LEVY_ESTIM_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_table();
    const Table* simd = avx2_table();
    return simd ? simd : &scalar_table();
  }();
  return *chosen;
}

}  // namespace levy::kernels
