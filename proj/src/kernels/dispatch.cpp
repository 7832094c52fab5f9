#include <cstdlib>
#include <string_view>

#include "backends.hpp"

namespace forage::kernels {

const KernelTable& scalar() { return detail::scalar_table(); }

const KernelTable* avx2() {
#if defined(FORAGE_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar()};
  if (const KernelTable* t = avx2()) out.push_back(t);
  return out;
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const auto backends = available();
    if (const char* env = std::getenv("FORAGE_KERNELS")) {
      for (const KernelTable* t : backends)
        if (t->name == std::string_view(env)) return *t;
    }
    return *backends.back();
  }();
  return chosen;
}

}  // namespace forage::kernels
