#include "aocsim/context.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aocsim/kernels.hpp"

namespace aocsim {

void update_context(ContextState& state, const std::vector<double>& served,
                    const std::vector<double>& vanish,
                    const std::vector<double>& window) {
  std::size_t n = state.k.size();
  if (served.size() != n || vanish.size() != n || window.size() != n)
    throw std::logic_error("update_context: array lengths disagree");
  kernels::aoc_update(state.k.data(), served.data(), vanish.data(),
                      window.data(), n);
}

double accuracy(const ModelProfile& model, double k) {
  double p = (k > 0.0) ? std::pow(k, model.alpha) : 0.0;
  double a = (model.acc_zero + model.acc_one_gain * std::log2(1.0 + p)) / 100.0;
  return std::clamp(a, 0.0, 1.0);
}

double effective_examples(const ContextState& state, int service, int model) {
  if (state.k.empty()) return 0.0;
  return state.k[state.pair(service, model)];
}

}  // namespace aocsim
