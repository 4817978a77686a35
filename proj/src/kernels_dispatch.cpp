#include <cstdlib>
#include <cstring>

#include "gbh/kernels.hpp"

namespace gbh::kernels {
namespace {

const Table* resolve() {
  const char* override_name = std::getenv("GBH_KERNELS");
  if (override_name && std::strcmp(override_name, "scalar") == 0) return &scalar();
#if defined(GBH_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64))
  if (override_name && std::strcmp(override_name, "avx2") == 0) return &avx2();
  if (!override_name && avx2_supported()) return &avx2();
#endif
  return &scalar();
}

}  // namespace

const Table& active() {
  static const Table* t = resolve();
  return *t;
}

std::string active_name() { return active().name; }

}  // namespace gbh::kernels
