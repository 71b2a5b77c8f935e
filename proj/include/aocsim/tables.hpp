#pragma once

#include <cstddef>
#include <vector>

#include "aocsim/catalog.hpp"

namespace aocsim {

// Dense per-pair broadcasts of the scenario, service-major: index
// pair(i, m) = i * n_models + m. Built once per materialized scenario and
// shared read-only by policies, the engine, and the cost kernels.
struct PairTable {
  int n_services = 0;
  int n_models = 0;
  int n_servers = 0;
  std::size_t n_pairs = 0;

  std::vector<double> vanish;       // override-aware per pair
  std::vector<double> window;
  std::vector<double> acc_zero;
  std::vector<double> acc_one_gain;
  std::vector<double> alpha;
  std::vector<double> size_gb;      // model footprint, repeated per service
  std::vector<double> flops;        // per-request GFLOPs
  std::vector<double> cloud_price;  // per-model override or the default unit

  std::vector<int> preferred;                 // per service: model index
  std::vector<std::vector<int>> group_peers;  // per service: models in the
                                              // preferred model's group

  std::vector<double> memory_gb;      // per server: G_n
  std::vector<double> energy_budget;  // per server: GFLOPs servable per slot
  std::vector<std::vector<double>> flops_over_capacity;  // per server, per pair

  CostCoefficients costs;

  std::size_t pair(int service, int model) const {
    return static_cast<std::size_t>(service) * n_models + model;
  }

  static PairTable build(const ScenarioConfig& config);
};

}  // namespace aocsim
