#include "wntm/kernels.hpp"

namespace wntm::kernels {

const Kernels* avx2_table();  // defined in avx2.cpp; nullptr if not built

const Kernels* avx2() {
#if defined(__x86_64__) || defined(__i386__)
  if (__builtin_cpu_supports("avx2")) {
    return avx2_table();
  }
#endif
  return nullptr;
}

const Kernels& active() {
  static const Kernels* best = [] {
    if (const Kernels* k = avx2()) return k;
    return &scalar();
  }();
  return *best;
}

}  // namespace wntm::kernels
