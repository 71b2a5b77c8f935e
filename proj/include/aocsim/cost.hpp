#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aocsim/catalog.hpp"

namespace aocsim {

struct CostBreakdown {
  double switching = 0.0;
  double transmission = 0.0;
  double computing = 0.0;
  double accuracy_loss = 0.0;
  double cloud = 0.0;
  double total = 0.0;  // maintained as the exact sum of the five components
};

namespace cost {

// Cost of newly cached pairs at lambda per load; evictions are free.
double switching_cost(const std::vector<std::uint8_t>& prev_cache,
                      const std::vector<std::uint8_t>& new_cache,
                      double lambda);

// trans_unit per edge-served request.
double transmission_cost(const double* edge_served, std::size_t n,
                         double trans_unit);

// compute_coeff * sum(edge_served[p] * flops_over_capacity[p]), where
// flops_over_capacity is the per-request workload divided by the server's
// aggregate compute capacity.
double computing_cost(const double* edge_served,
                      const double* flops_over_capacity, std::size_t n,
                      double compute_coeff);

// acc_coeff * sum((1 - accuracy[p]) * edge_served[p]); accuracy is the
// serving model's in-context accuracy at the pre-serving counters.
double accuracy_cost(const double* accuracy, const double* edge_served,
                     std::size_t n, double acc_coeff);

// sum(price[p] * cloud_served[p]); cloud requests carry no accuracy cost.
double cloud_cost(const double* cloud_served, const double* price,
                  std::size_t n);

// One committed slot for one server, as dense arrays over (service, model)
// pairs. edge_served sits at the pair that actually executes the request
// (after group substitution); cloud_served sits at the preferred pair.
struct ServerSlotView {
  const double* edge_served = nullptr;
  const double* cloud_served = nullptr;
  const double* accuracy = nullptr;
  const double* flops_over_capacity = nullptr;
  const double* cloud_price = nullptr;
  std::size_t n = 0;
  int loads = 0;  // pairs newly cached this slot
};

// Assembles one slot's breakdown across servers; total is the exact sum
// of the five components.
CostBreakdown slot_cost(const std::vector<ServerSlotView>& servers,
                        const CostCoefficients& costs);

// Arithmetic mean of slot totals; rejects an empty sequence.
double average_objective(const std::vector<CostBreakdown>& slots);

}  // namespace cost
}  // namespace aocsim
