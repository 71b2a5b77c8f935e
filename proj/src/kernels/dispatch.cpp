#include "aocsim/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace aocsim::kernels {
namespace {

bool avx2_available() {
#if AOCSIM_HAVE_AVX2_BACKEND
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend pick_initial() {
  if (const char* env = std::getenv("AOCSIM_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

Backend& current() {
  static Backend selected = pick_initial();
  return selected;
}

}  // namespace

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

Backend active_backend() { return current(); }

bool set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) return false;
  current() = b;
  return true;
}

void aoc_update(double* k, const double* served, const double* vanish,
                const double* wmax, std::size_t n) {
#if AOCSIM_HAVE_AVX2_BACKEND
  if (current() == Backend::avx2) {
    avx2::aoc_update(k, served, vanish, wmax, n);
    return;
  }
#endif
  scalar::aoc_update(k, served, vanish, wmax, n);
}

void accuracy_batch(double* out, const double* k, const double* a0,
                    const double* a1, const double* alpha, std::size_t n) {
#if AOCSIM_HAVE_AVX2_BACKEND
  if (current() == Backend::avx2) {
    avx2::accuracy_batch(out, k, a0, a1, alpha, n);
    return;
  }
#endif
  scalar::accuracy_batch(out, k, a0, a1, alpha, n);
}

double sum(const double* x, std::size_t n) {
#if AOCSIM_HAVE_AVX2_BACKEND
  if (current() == Backend::avx2) return avx2::sum(x, n);
#endif
  return scalar::sum(x, n);
}

double dot2(const double* x, const double* y, std::size_t n) {
#if AOCSIM_HAVE_AVX2_BACKEND
  if (current() == Backend::avx2) return avx2::dot2(x, y, n);
#endif
  return scalar::dot2(x, y, n);
}

double one_minus_dot2(const double* w, const double* x, std::size_t n) {
#if AOCSIM_HAVE_AVX2_BACKEND
  if (current() == Backend::avx2) return avx2::one_minus_dot2(w, x, n);
#endif
  return scalar::one_minus_dot2(w, x, n);
}

}  // namespace aocsim::kernels
