#pragma once

#include <cstddef>
#include <vector>

#include "aocsim/catalog.hpp"

namespace aocsim {

// Effective-example counters for one server, dense over (service, model)
// pairs in service-major order. Counters start at zero and survive cache
// eviction; only the vanishing factor erodes them.
struct ContextState {
  int n_services = 0;
  int n_models = 0;
  std::vector<double> k;  // each entry in [0, w_m]

  ContextState() = default;
  ContextState(int services, int models)
      : n_services(services),
        n_models(models),
        k(static_cast<std::size_t>(services) * models, 0.0) {}

  std::size_t pair(int service, int model) const {
    return static_cast<std::size_t>(service) * n_models + model;
  }
};

// K' = min(w, max(0, K + served - vanish)) per pair, in place. served holds
// fractional edge-served counts; pairs with no demand still decay. All three
// argument arrays must match the counter array in length (they are dense
// broadcasts, so absent pairs are simply zeros).
void update_context(ContextState& state, const std::vector<double>& served,
                    const std::vector<double>& vanish,
                    const std::vector<double>& window);

// In-context accuracy as a fraction of 1. K = 0 returns acc_zero/100
// exactly (the zero-shot value, also dodging K^alpha for negative alpha);
// otherwise (acc_zero + acc_one_gain * log2(1 + K^alpha)) / 100, clamped
// to [0, 1].
double accuracy(const ModelProfile& model, double k);

// K for one pair; never-updated pairs read 0.
double effective_examples(const ContextState& state, int service, int model);

}  // namespace aocsim
