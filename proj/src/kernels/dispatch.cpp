#include "biphoton/kernels.hpp"

#include <cstdlib>
#include <string>

namespace biphoton::kernels {

#if defined(BIPHOTON_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;  // avx2.cpp
#endif

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_table() noexcept {
#if defined(BIPHOTON_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (const KernelTable* t = avx2_table()) tables.push_back(t);
  return tables;
}

const KernelTable& active() noexcept {
  static const KernelTable& selected = []() -> const KernelTable& {
    const char* forced = std::getenv("BIPHOTON_ISA");
    if (forced != nullptr && std::string(forced) == "scalar") return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return selected;
}

}  // namespace biphoton::kernels
