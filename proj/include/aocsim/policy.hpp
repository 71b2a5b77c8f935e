#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "aocsim/context.hpp"
#include "aocsim/tables.hpp"

namespace aocsim {

enum class PolicyKind { least_context, fifo, lfu, cloud_only };

// CLI names: lc, fifo, lfu, cloud.
std::optional<PolicyKind> parse_policy(std::string_view name);
const char* policy_name(PolicyKind kind);

// Baseline bookkeeping carried across slots, per server: cache residency in
// load order (FIFO) and cumulative edge-served counts per pair (LFU). Hit
// counts survive eviction.
struct PolicyState {
  std::vector<std::vector<std::uint32_t>> load_order;
  std::vector<std::vector<double>> hit_counts;
};

PolicyState init_policy_state(const PairTable& pt);

// One server's committed cache for a slot: dense residency bits plus the
// same set in load order (retained pairs keep their age; admissions are
// appended in admission order).
struct CacheDecision {
  std::vector<std::uint8_t> cache;
  std::vector<std::uint32_t> load_order;
};

// Greedy selection maximizing total effective context under the memory
// capacity: pairs ranked by K per GB, with a best-single-item fallback that
// secures the 1/2-approximation bound. Pairs at K = 0 with pending demand
// anywhere in their substitution group compete with a tiny demand credit so
// fresh models can be admitted at all.
CacheDecision decide_cache_lc(const PairTable& pt, int server,
                              const PolicyState& state,
                              const ContextState& ctx,
                              const std::vector<double>& requests,
                              double capacity_gb);

// Admits demanded-but-uncached preferred pairs in ascending request-count
// order, evicting the earliest-loaded pair while space is short. Pairs
// larger than the whole capacity are skipped.
CacheDecision decide_cache_fifo(const PairTable& pt, int server,
                                const PolicyState& state,
                                const std::vector<double>& requests,
                                double capacity_gb);

// As FIFO, but eviction order is ascending cumulative hits, ties broken by
// earliest load time.
CacheDecision decide_cache_lfu(const PairTable& pt, int server,
                               const PolicyState& state,
                               const std::vector<double>& requests,
                               double capacity_gb);

CacheDecision decide_cloud_only(const PairTable& pt);

// Exact 0/1 knapsack by exhaustive search, the test oracle for the greedy.
// Bounded to 25 items.
struct KnapsackResult {
  std::vector<int> items;
  double value = 0.0;
};
KnapsackResult knapsack_exact(const std::vector<double>& values,
                              const std::vector<double>& weights,
                              double capacity);

// Moves each service's demand to the cheapest-marginal cached pair in its
// substitution group (possibly the preferred pair itself). Demand with no
// cached group pair stays at the preferred pair and will not be served.
// accuracy is the dense in-context accuracy at the current counters.
std::vector<double> route_requests(const PairTable& pt, int server,
                                   const std::vector<std::uint8_t>& cache,
                                   const std::vector<double>& requests,
                                   const std::vector<double>& accuracy);

// Serving fractions for routed demand: a pair is served fully when its
// per-request edge marginal (transmission + compute + accuracy loss)
// undercuts the origin's cloud price, subject to the per-slot energy
// budget, which is filled greedily in descending savings order; the
// boundary pair gets the exact fractional b that exhausts the budget.
struct OffloadDecision {
  std::vector<double> b;
  std::vector<double> edge;  // routed * b
  double energy_used_gflops = 0.0;
};
OffloadDecision decide_offloading(const PairTable& pt, int server,
                                  const std::vector<std::uint8_t>& cache,
                                  const std::vector<double>& routed,
                                  const std::vector<double>& accuracy,
                                  double energy_budget_gflops);

}  // namespace aocsim
