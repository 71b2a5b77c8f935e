#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aocsim/catalog.hpp"
#include "aocsim/context.hpp"
#include "aocsim/cost.hpp"
#include "aocsim/policy.hpp"
#include "aocsim/tables.hpp"

namespace aocsim {

// Splittable deterministic generator (SplitMix64 core). Streams are derived
// per (seed, slot, server, service) so that adding entities to a scenario
// never perturbs the draws of existing ones.
struct Rng {
  std::uint64_t state = 0;
  explicit Rng(std::uint64_t s) : state(s) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
};

Rng request_stream(std::uint64_t seed, std::int64_t slot, int server,
                   int service);

// Inversion sampling, chunked so the mean of any single inversion stays
// small enough for the cumulative product not to underflow.
std::int64_t poisson(Rng& rng, double mean);

// Generated demand, dense per pair and integral; nonzero only at each
// service's preferred pair (substitution happens at serving time).
struct RequestMatrix {
  std::vector<std::vector<double>> counts;  // per server
};

RequestMatrix generate_requests(std::uint64_t seed, const ScenarioConfig& cfg,
                                const PairTable& pt, std::int64_t slot);

struct SlotMetrics {
  std::int64_t slot = 0;
  CostBreakdown cost;
  double generated = 0.0;
  double edge_served = 0.0;
  double cloud_served = 0.0;
  double total_context = 0.0;  // sum of all counters after the slot's update
  std::vector<std::vector<std::uint32_t>> cached;  // per server, load order
};

struct SimulationState {
  std::int64_t slot = 0;
  std::uint64_t seed = 0;
  std::vector<ContextState> context;              // per server
  std::vector<std::vector<std::uint8_t>> cache;   // per server, dense bits
  std::vector<std::vector<double>> prev_edge;     // last slot's served counts
  PolicyState policy;
};

SimulationState init_state(const ScenarioConfig& cfg, const PairTable& pt,
                           std::uint64_t seed);

// One slot: generate demand, decide the cache, route and offload, verify
// the memory / serving / energy constraints, price the slot, then update
// context counters and policy bookkeeping. Throws on a constraint
// violation, which indicates a policy bug, never user error.
SlotMetrics step(SimulationState& state, const ScenarioConfig& cfg,
                 const PairTable& pt, PolicyKind kind);

struct RunReport {
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<SlotMetrics> per_slot;
  double average_total = 0.0;
  CostBreakdown component_averages;  // per-component means; .total is the
                                     // mean total, equal to average_total
  double switching_share = 0.0;  // switching / total over the final fifth
};

RunReport run(const ScenarioConfig& cfg, PolicyKind kind, std::uint64_t seed);

// Applies one sweep-axis value to a copy of the scenario. Axes: horizon,
// num_services (truncate or replicate round-robin), gpu_count (all
// servers), vanish (all models), window (all models). Throws
// ValidationError on an unknown axis or a value violating that axis's
// bounds.
ScenarioConfig materialize_axis(const ScenarioConfig& cfg,
                                const std::string& axis, double value);

struct SweepEntry {
  double axis_value = 0.0;
  PolicyKind policy = PolicyKind::cloud_only;
  std::uint64_t seed = 0;
  RunReport report;
};

// Per (value, policy) aggregate over seeds: component-wise mean and sample
// standard deviation of the per-run averages.
struct SweepCell {
  double axis_value = 0.0;
  PolicyKind policy = PolicyKind::cloud_only;
  CostBreakdown mean;
  CostBreakdown stddev;
};

struct SweepReport {
  std::string axis;  // empty when the report wraps plain runs
  std::vector<SweepEntry> runs;   // ordered (value, policy, seed)
  std::vector<SweepCell> cells;   // ordered (value, policy)
};

SweepReport sweep(const ScenarioConfig& cfg,
                  const std::vector<PolicyKind>& policies,
                  const std::string& axis, const std::vector<double>& values,
                  const std::vector<std::uint64_t>& seeds);

// Plain multi-run wrapper: the sweep report shape with an empty axis.
SweepReport run_many(const ScenarioConfig& cfg,
                     const std::vector<PolicyKind>& policies,
                     const std::vector<std::uint64_t>& seeds);

}  // namespace aocsim
