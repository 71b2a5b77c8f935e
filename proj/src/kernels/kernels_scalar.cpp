#include "aocsim/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace aocsim::kernels::scalar {

void aoc_update(double* k, const double* served, const double* vanish,
                const double* wmax, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double next = k[i] + served[i] - vanish[i];
    next = std::max(0.0, next);
    k[i] = std::min(wmax[i], next);
  }
}

void accuracy_batch(double* out, const double* k, const double* a0,
                    const double* a1, const double* alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double p = (k[i] > 0.0) ? std::pow(k[i], alpha[i]) : 0.0;
    double a = (a0[i] + a1[i] * std::log2(1.0 + p)) / 100.0;
    out[i] = std::clamp(a, 0.0, 1.0);
  }
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot2(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double one_minus_dot2(const double* w, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (1.0 - w[i]) * x[i];
  return acc;
}

}  // namespace aocsim::kernels::scalar
