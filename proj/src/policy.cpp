#include "aocsim/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aocsim {
namespace {

// demand credit per pending request for a fresh (K = 0) pair: must beat
// zero-demand candidates but never a genuine K >= 1
constexpr double kPendingEpsilon = 1e-6;

double pair_marginal(const PairTable& pt, int server, std::size_t p,
                     double accuracy) {
  return pt.costs.trans_unit +
         pt.costs.compute_coeff * pt.flops_over_capacity[server][p] +
         pt.costs.acc_coeff * (1.0 - accuracy);
}

// retained pairs keep their load age; admissions are appended as given
std::vector<std::uint32_t> merge_load_order(
    const std::vector<std::uint32_t>& prev_order,
    const std::vector<std::uint8_t>& cache,
    const std::vector<std::uint32_t>& admitted) {
  std::vector<std::uint32_t> order;
  order.reserve(prev_order.size() + admitted.size());
  for (std::uint32_t q : prev_order)
    if (cache[q]) order.push_back(q);
  for (std::uint32_t q : admitted) order.push_back(q);
  return order;
}

}  // namespace

std::optional<PolicyKind> parse_policy(std::string_view name) {
  if (name == "lc") return PolicyKind::least_context;
  if (name == "fifo") return PolicyKind::fifo;
  if (name == "lfu") return PolicyKind::lfu;
  if (name == "cloud") return PolicyKind::cloud_only;
  return std::nullopt;
}

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::least_context: return "lc";
    case PolicyKind::fifo: return "fifo";
    case PolicyKind::lfu: return "lfu";
    case PolicyKind::cloud_only: return "cloud";
  }
  return "?";
}

PolicyState init_policy_state(const PairTable& pt) {
  PolicyState st;
  st.load_order.resize(pt.n_servers);
  st.hit_counts.assign(pt.n_servers, std::vector<double>(pt.n_pairs, 0.0));
  return st;
}

CacheDecision decide_cache_lc(const PairTable& pt, int server,
                              const PolicyState& state,
                              const ContextState& ctx,
                              const std::vector<double>& requests,
                              double capacity_gb) {
  std::vector<double> pending(pt.n_pairs, 0.0);
  for (int i = 0; i < pt.n_services; ++i) {
    double r = requests[pt.pair(i, pt.preferred[i])];
    if (r <= 0) continue;
    for (int m : pt.group_peers[i]) pending[pt.pair(i, m)] = r;
  }

  struct Cand {
    double density;
    double value;
    bool has_pending;
    std::uint32_t p;
  };
  std::vector<Cand> cands;
  for (std::size_t p = 0; p < pt.n_pairs; ++p) {
    double value = ctx.k[p] > 0.0 ? ctx.k[p] : kPendingEpsilon * pending[p];
    if (value <= 0.0 || pt.size_gb[p] > capacity_gb) continue;
    cands.push_back({value / pt.size_gb[p], value, pending[p] > 0.0,
                     static_cast<std::uint32_t>(p)});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.density != b.density) return a.density > b.density;
    if (a.has_pending != b.has_pending) return a.has_pending;
    return a.p < b.p;
  });

  std::vector<std::uint32_t> admitted;
  double used = 0.0;
  double greedy_value = 0.0;
  for (const Cand& c : cands) {
    if (used + pt.size_gb[c.p] > capacity_gb) continue;
    admitted.push_back(c.p);
    used += pt.size_gb[c.p];
    greedy_value += c.value;
  }

  // the classic half-approximation needs max(greedy, best single item)
  const Cand* best_single = nullptr;
  for (const Cand& c : cands)
    if (!best_single || c.value > best_single->value) best_single = &c;
  if (best_single && best_single->value > greedy_value)
    admitted = {best_single->p};

  CacheDecision dec;
  dec.cache.assign(pt.n_pairs, 0);
  for (std::uint32_t p : admitted) dec.cache[p] = 1;
  std::vector<std::uint32_t> fresh;
  for (std::uint32_t p : admitted) {
    bool was_cached = false;
    for (std::uint32_t q : state.load_order[server]) was_cached |= (q == p);
    if (!was_cached) fresh.push_back(p);
  }
  dec.load_order = merge_load_order(state.load_order[server], dec.cache, fresh);
  return dec;
}

namespace {

enum class EvictRule { oldest, fewest_hits };

CacheDecision decide_cache_baseline(const PairTable& pt, int server,
                                    const PolicyState& state,
                                    const std::vector<double>& requests,
                                    double capacity_gb, EvictRule rule) {
  CacheDecision dec;
  dec.cache.assign(pt.n_pairs, 0);
  std::vector<std::uint32_t> order = state.load_order[server];
  double used = 0.0;
  for (std::uint32_t q : order) {
    dec.cache[q] = 1;
    used += pt.size_gb[q];
  }

  struct Cand {
    double r;
    std::uint32_t p;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < pt.n_services; ++i) {
    std::size_t p = pt.pair(i, pt.preferred[i]);
    double r = requests[p];
    if (r > 0 && !dec.cache[p] && pt.size_gb[p] <= capacity_gb)
      cands.push_back({r, static_cast<std::uint32_t>(p)});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.r != b.r) return a.r < b.r;
    return a.p < b.p;
  });

  const std::vector<double>& hits = state.hit_counts[server];
  for (const Cand& c : cands) {
    while (used + pt.size_gb[c.p] > capacity_gb) {
      std::size_t victim = 0;
      if (rule == EvictRule::fewest_hits) {
        for (std::size_t j = 1; j < order.size(); ++j)
          if (hits[order[j]] < hits[order[victim]]) victim = j;
      }
      std::uint32_t evicted = order[victim];
      order.erase(order.begin() + victim);
      dec.cache[evicted] = 0;
      used -= pt.size_gb[evicted];
    }
    order.push_back(c.p);
    dec.cache[c.p] = 1;
    used += pt.size_gb[c.p];
  }
  dec.load_order = std::move(order);
  return dec;
}

}  // namespace

CacheDecision decide_cache_fifo(const PairTable& pt, int server,
                                const PolicyState& state,
                                const std::vector<double>& requests,
                                double capacity_gb) {
  return decide_cache_baseline(pt, server, state, requests, capacity_gb,
                               EvictRule::oldest);
}

CacheDecision decide_cache_lfu(const PairTable& pt, int server,
                               const PolicyState& state,
                               const std::vector<double>& requests,
                               double capacity_gb) {
  return decide_cache_baseline(pt, server, state, requests, capacity_gb,
                               EvictRule::fewest_hits);
}

CacheDecision decide_cloud_only(const PairTable& pt) {
  CacheDecision dec;
  dec.cache.assign(pt.n_pairs, 0);
  return dec;
}

KnapsackResult knapsack_exact(const std::vector<double>& values,
                              const std::vector<double>& weights,
                              double capacity) {
  std::size_t n = values.size();
  if (weights.size() != n)
    throw std::invalid_argument("knapsack_exact: values/weights length mismatch");
  if (n > 25)
    throw std::invalid_argument("knapsack_exact: more than 25 items");
  for (double w : weights)
    if (!(w > 0))
      throw std::invalid_argument("knapsack_exact: weights must be positive");

  // Gray-code walk keeps the running value/weight incremental; the best
  // subset's value is recomputed from scratch to shed accumulated rounding.
  std::uint32_t best_mask = 0;
  double best_value = 0.0;
  std::uint32_t gray = 0;
  double v = 0.0, w = 0.0;
  for (std::uint64_t s = 1; s < (1ull << n); ++s) {
    int bit = std::countr_zero(s);
    std::uint32_t flip = 1u << bit;
    gray ^= flip;
    if (gray & flip) {
      v += values[bit];
      w += weights[bit];
    } else {
      v -= values[bit];
      w -= weights[bit];
    }
    if (w <= capacity && v > best_value) {
      double exact_v = 0.0, exact_w = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (gray & (1u << j)) {
          exact_v += values[j];
          exact_w += weights[j];
        }
      if (exact_w <= capacity && exact_v > best_value) {
        best_value = exact_v;
        best_mask = gray;
      }
    }
  }

  KnapsackResult out;
  out.value = best_value;
  for (std::size_t j = 0; j < n; ++j)
    if (best_mask & (1u << j)) out.items.push_back(static_cast<int>(j));
  return out;
}

std::vector<double> route_requests(const PairTable& pt, int server,
                                   const std::vector<std::uint8_t>& cache,
                                   const std::vector<double>& requests,
                                   const std::vector<double>& accuracy) {
  std::vector<double> routed(pt.n_pairs, 0.0);
  for (int i = 0; i < pt.n_services; ++i) {
    std::size_t pref_p = pt.pair(i, pt.preferred[i]);
    double r = requests[pref_p];
    if (r <= 0) continue;
    int best = -1;
    double best_marginal = std::numeric_limits<double>::infinity();
    for (int m : pt.group_peers[i]) {
      std::size_t p = pt.pair(i, m);
      if (!cache[p]) continue;
      double marginal = pair_marginal(pt, server, p, accuracy[p]);
      if (marginal < best_marginal) {
        best_marginal = marginal;
        best = m;
      }
    }
    routed[best < 0 ? pref_p : pt.pair(i, best)] += r;
  }
  return routed;
}

OffloadDecision decide_offloading(const PairTable& pt, int server,
                                  const std::vector<std::uint8_t>& cache,
                                  const std::vector<double>& routed,
                                  const std::vector<double>& accuracy,
                                  double energy_budget_gflops) {
  OffloadDecision out;
  out.b.assign(pt.n_pairs, 0.0);
  out.edge.assign(pt.n_pairs, 0.0);

  // Rank by saving per GFLOP: energy is the binding resource, so the
  // fractional relaxation is optimized by density, not by raw saving.
  struct Cand {
    double density;
    std::uint32_t p;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < pt.n_services; ++i) {
    double origin_price = pt.cloud_price[pt.pair(i, pt.preferred[i])];
    for (int m : pt.group_peers[i]) {
      std::size_t p = pt.pair(i, m);
      if (routed[p] <= 0 || !cache[p]) continue;
      double marginal = pair_marginal(pt, server, p, accuracy[p]);
      if (marginal > origin_price) continue;  // cloud is cheaper, leave b = 0
      cands.push_back({(origin_price - marginal) / pt.flops[p],
                       static_cast<std::uint32_t>(p)});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.density != b.density) return a.density > b.density;
    return a.p < b.p;
  });

  double remaining = energy_budget_gflops;
  for (const Cand& c : cands) {
    if (remaining <= 0) break;
    double need = pt.flops[c.p] * routed[c.p];
    if (need <= remaining) {
      out.b[c.p] = 1.0;
      out.edge[c.p] = routed[c.p];
      remaining -= need;
    } else {
      double frac = remaining / need;
      out.b[c.p] = frac;
      out.edge[c.p] = routed[c.p] * frac;
      remaining = 0.0;
    }
  }
  out.energy_used_gflops = energy_budget_gflops - remaining;
  return out;
}

}  // namespace aocsim
