#include "aocsim/cost.hpp"

#include <stdexcept>

#include "aocsim/kernels.hpp"

namespace aocsim::cost {

double switching_cost(const std::vector<std::uint8_t>& prev_cache,
                      const std::vector<std::uint8_t>& new_cache,
                      double lambda) {
  int loads = 0;
  for (std::size_t p = 0; p < new_cache.size(); ++p)
    loads += (new_cache[p] && (p >= prev_cache.size() || !prev_cache[p]));
  return lambda * loads;
}

double transmission_cost(const double* edge_served, std::size_t n,
                         double trans_unit) {
  return trans_unit * kernels::sum(edge_served, n);
}

double computing_cost(const double* edge_served,
                      const double* flops_over_capacity, std::size_t n,
                      double compute_coeff) {
  return compute_coeff * kernels::dot2(edge_served, flops_over_capacity, n);
}

double accuracy_cost(const double* accuracy, const double* edge_served,
                     std::size_t n, double acc_coeff) {
  return acc_coeff * kernels::one_minus_dot2(accuracy, edge_served, n);
}

double cloud_cost(const double* cloud_served, const double* price,
                  std::size_t n) {
  return kernels::dot2(cloud_served, price, n);
}

CostBreakdown slot_cost(const std::vector<ServerSlotView>& servers,
                        const CostCoefficients& costs) {
  CostBreakdown out;
  int loads = 0;
  for (const ServerSlotView& s : servers) {
    loads += s.loads;
    out.transmission += transmission_cost(s.edge_served, s.n, costs.trans_unit);
    out.computing += computing_cost(s.edge_served, s.flops_over_capacity, s.n,
                                    costs.compute_coeff);
    out.accuracy_loss +=
        accuracy_cost(s.accuracy, s.edge_served, s.n, costs.acc_coeff);
    out.cloud += cloud_cost(s.cloud_served, s.cloud_price, s.n);
  }
  out.switching = costs.switch_lambda * loads;
  out.total = out.switching + out.transmission + out.computing +
              out.accuracy_loss + out.cloud;
  return out;
}

double average_objective(const std::vector<CostBreakdown>& slots) {
  if (slots.empty())
    throw std::invalid_argument("average_objective: empty slot sequence");
  double acc = 0.0;
  for (const CostBreakdown& b : slots) acc += b.total;
  return acc / static_cast<double>(slots.size());
}

}  // namespace aocsim::cost
