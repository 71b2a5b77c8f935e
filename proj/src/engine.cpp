#include "aocsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "aocsim/kernels.hpp"

namespace aocsim {

PairTable PairTable::build(const ScenarioConfig& cfg) {
  PairTable pt;
  pt.n_services = static_cast<int>(cfg.services.size());
  pt.n_models = static_cast<int>(cfg.models.size());
  pt.n_servers = static_cast<int>(cfg.servers.size());
  pt.n_pairs = static_cast<std::size_t>(pt.n_services) * pt.n_models;
  pt.costs = cfg.costs;

  pt.vanish.resize(pt.n_pairs);
  pt.window.resize(pt.n_pairs);
  pt.acc_zero.resize(pt.n_pairs);
  pt.acc_one_gain.resize(pt.n_pairs);
  pt.alpha.resize(pt.n_pairs);
  pt.size_gb.resize(pt.n_pairs);
  pt.flops.resize(pt.n_pairs);
  pt.cloud_price.resize(pt.n_pairs);

  for (int i = 0; i < pt.n_services; ++i) {
    const ServiceProfile& svc = cfg.services[i];
    pt.preferred.push_back(svc.preferred_index);
    for (int m = 0; m < pt.n_models; ++m) {
      const ModelProfile& mod = cfg.models[m];
      std::size_t p = pt.pair(i, m);
      pt.vanish[p] = svc.vanish_override.value_or(mod.vanish);
      pt.window[p] = mod.window;
      pt.acc_zero[p] = mod.acc_zero;
      pt.acc_one_gain[p] = mod.acc_one_gain;
      pt.alpha[p] = mod.alpha;
      pt.size_gb[p] = mod.size;
      pt.flops[p] = mod.flops_per_request;
      pt.cloud_price[p] = mod.cloud_unit.value_or(cfg.costs.cloud_unit);
    }
  }

  for (int i = 0; i < pt.n_services; ++i) {
    const std::string& group = cfg.models[pt.preferred[i]].group;
    std::vector<int> peers;
    for (int m = 0; m < pt.n_models; ++m)
      if (cfg.models[m].group == group) peers.push_back(m);
    pt.group_peers.push_back(std::move(peers));
  }

  for (const ServerProfile& server : cfg.servers) {
    pt.memory_gb.push_back(server.memory_gb());
    pt.energy_budget.push_back(server.energy_budget_gflops());
    std::vector<double> foc(pt.n_pairs);
    for (std::size_t p = 0; p < pt.n_pairs; ++p)
      foc[p] = pt.flops[p] / server.gflops();
    pt.flops_over_capacity.push_back(std::move(foc));
  }
  return pt;
}

namespace {

inline std::uint64_t splitmix_step(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix2(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (0x9E3779B97F4A7C15ull * (b + 0x632BE59BD9B4E019ull));
  return splitmix_step(s);
}

// inversion on a mean small enough that exp(-mean) keeps full precision
std::int64_t poisson_small(Rng& rng, double mean) {
  double u = rng.uniform();
  double p = std::exp(-mean);
  double cum = p;
  std::int64_t k = 0;
  std::int64_t cap = static_cast<std::int64_t>(10.0 * mean) + 100;
  while (u > cum && k < cap) {
    ++k;
    p *= mean / static_cast<double>(k);
    cum += p;
  }
  return k;
}

}  // namespace

std::uint64_t Rng::next() { return splitmix_step(state); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Rng request_stream(std::uint64_t seed, std::int64_t slot, int server,
                   int service) {
  std::uint64_t h = mix2(seed, static_cast<std::uint64_t>(slot));
  h = mix2(h, static_cast<std::uint64_t>(server));
  h = mix2(h, static_cast<std::uint64_t>(service));
  return Rng(h);
}

std::int64_t poisson(Rng& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  std::int64_t total = 0;
  double remaining = mean;
  while (remaining > 30.0) {
    total += poisson_small(rng, 30.0);
    remaining -= 30.0;
  }
  return total + poisson_small(rng, remaining);
}

RequestMatrix generate_requests(std::uint64_t seed, const ScenarioConfig& cfg,
                                const PairTable& pt, std::int64_t slot) {
  RequestMatrix req;
  req.counts.assign(pt.n_servers, std::vector<double>(pt.n_pairs, 0.0));
  for (int n = 0; n < pt.n_servers; ++n) {
    for (int i = 0; i < pt.n_services; ++i) {
      double rate = cfg.services[i].rate;
      if (rate <= 0.0) continue;
      Rng stream = request_stream(seed, slot, n, i);
      req.counts[n][pt.pair(i, pt.preferred[i])] =
          static_cast<double>(poisson(stream, rate));
    }
  }
  return req;
}

SimulationState init_state(const ScenarioConfig& cfg, const PairTable& pt,
                           std::uint64_t seed) {
  SimulationState st;
  st.seed = seed;
  st.context.assign(pt.n_servers, ContextState(pt.n_services, pt.n_models));
  st.cache.assign(pt.n_servers, std::vector<std::uint8_t>(pt.n_pairs, 0));
  st.prev_edge.assign(pt.n_servers, std::vector<double>(pt.n_pairs, 0.0));
  st.policy = init_policy_state(pt);
  (void)cfg;
  return st;
}

namespace {

[[noreturn]] void constraint_violation(const ScenarioConfig& cfg,
                                       const PairTable& pt, int server,
                                       std::size_t p, const char* what) {
  int i = static_cast<int>(p) / pt.n_models;
  int m = static_cast<int>(p) % pt.n_models;
  throw std::runtime_error(std::string(what) + " at (" + cfg.servers[server].id +
                           ", " + cfg.services[i].id + ", " + cfg.models[m].id +
                           ")");
}

}  // namespace

SlotMetrics step(SimulationState& st, const ScenarioConfig& cfg,
                 const PairTable& pt, PolicyKind kind) {
  const int N = pt.n_servers;
  const std::size_t P = pt.n_pairs;
  RequestMatrix req = generate_requests(st.seed, cfg, pt, st.slot);

  SlotMetrics met;
  met.slot = st.slot;
  met.cached.resize(N);

  std::vector<CacheDecision> decs(N);
  std::vector<std::vector<double>> acc(N), edge(N), cloud(N);
  std::vector<cost::ServerSlotView> views(N);

  for (int n = 0; n < N; ++n) {
    const std::vector<double>& requests = req.counts[n];

    // memory available to the cache, shrunk by the per-request runtime
    // reservation of the previous slot's serving volume
    double capacity = pt.memory_gb[n];
    if (pt.costs.runtime_mem_per_request > 0.0)
      capacity = std::max(
          0.0, capacity - pt.costs.runtime_mem_per_request *
                              kernels::dot2(st.prev_edge[n].data(),
                                            pt.size_gb.data(), P));

    // a server that can serve nothing must not pay to cache anything,
    // so a zero energy budget degenerates every policy to cloud-only
    if (kind == PolicyKind::cloud_only || pt.energy_budget[n] <= 0.0) {
      decs[n] = decide_cloud_only(pt);
    } else {
      switch (kind) {
        case PolicyKind::least_context:
          decs[n] = decide_cache_lc(pt, n, st.policy, st.context[n], requests,
                                    capacity);
          break;
        case PolicyKind::fifo:
          decs[n] = decide_cache_fifo(pt, n, st.policy, requests, capacity);
          break;
        case PolicyKind::lfu:
          decs[n] = decide_cache_lfu(pt, n, st.policy, requests, capacity);
          break;
        default:
          decs[n] = decide_cloud_only(pt);
          break;
      }
    }
    const CacheDecision& dec = decs[n];

    double cached_gb = 0.0;
    for (std::size_t p = 0; p < P; ++p)
      if (dec.cache[p]) cached_gb += pt.size_gb[p];
    if (cached_gb > pt.memory_gb[n] * (1.0 + 1e-12) + 1e-12)
      throw std::runtime_error("memory capacity exceeded at server " +
                               cfg.servers[n].id);

    acc[n].resize(P);
    kernels::accuracy_batch(acc[n].data(), st.context[n].k.data(),
                            pt.acc_zero.data(), pt.acc_one_gain.data(),
                            pt.alpha.data(), P);

    std::vector<double> routed =
        route_requests(pt, n, dec.cache, requests, acc[n]);
    OffloadDecision off = decide_offloading(pt, n, dec.cache, routed, acc[n],
                                            pt.energy_budget[n]);
    edge[n] = std::move(off.edge);

    // cloud remainder per service; the complement is kept exact by a
    // Sterbenz-safe rewrite of whichever side rounds
    cloud[n].assign(P, 0.0);
    for (int i = 0; i < pt.n_services; ++i) {
      std::size_t pref_p = pt.pair(i, pt.preferred[i]);
      double r = requests[pref_p];
      if (r <= 0.0) continue;
      std::size_t serve_p = pref_p;  // routing targets one pair per service
      for (int m : pt.group_peers[i])
        if (edge[n][pt.pair(i, m)] > 0.0) serve_p = pt.pair(i, m);
      double e = edge[n][serve_p];
      if (e >= 0.5 * r) {
        cloud[n][pref_p] = r - e;
      } else {
        double c = r - e;
        cloud[n][pref_p] = c;
        edge[n][serve_p] = r - c;
      }
      // exact by construction; a mismatch is an engine bug
      if (edge[n][serve_p] + cloud[n][pref_p] != r)
        constraint_violation(cfg, pt, n, serve_p,
                             "request conservation broken");
    }

    for (std::size_t p = 0; p < P; ++p)
      if (edge[n][p] > 0.0 && !dec.cache[p])
        constraint_violation(cfg, pt, n, p, "serving without a cached model");

    double energy_used = kernels::dot2(edge[n].data(), pt.flops.data(), P);
    if (energy_used > pt.energy_budget[n] * (1.0 + 1e-9) + 1e-9)
      throw std::runtime_error("energy budget exceeded at server " +
                               cfg.servers[n].id);

    views[n] = cost::ServerSlotView{edge[n].data(),
                                    cloud[n].data(),
                                    acc[n].data(),
                                    pt.flops_over_capacity[n].data(),
                                    pt.cloud_price.data(),
                                    P,
                                    0};
    for (std::size_t p = 0; p < P; ++p)
      views[n].loads += (dec.cache[p] && !st.cache[n][p]);
  }

  met.cost = cost::slot_cost(views, pt.costs);

  for (int n = 0; n < N; ++n) {
    met.generated += kernels::sum(req.counts[n].data(), P);
    met.edge_served += kernels::sum(edge[n].data(), P);
    met.cloud_served += kernels::sum(cloud[n].data(), P);

    update_context(st.context[n], edge[n], pt.vanish, pt.window);
    met.total_context += kernels::sum(st.context[n].k.data(), P);

    st.policy.load_order[n] = decs[n].load_order;
    for (std::size_t p = 0; p < P; ++p)
      st.policy.hit_counts[n][p] += edge[n][p];
    st.cache[n] = std::move(decs[n].cache);
    st.prev_edge[n] = std::move(edge[n]);
    met.cached[n] = st.policy.load_order[n];
  }

  ++st.slot;
  return met;
}

RunReport run(const ScenarioConfig& cfg, PolicyKind kind, std::uint64_t seed) {
  PairTable pt = PairTable::build(cfg);
  SimulationState st = init_state(cfg, pt, seed);

  RunReport rep;
  rep.policy = policy_name(kind);
  rep.seed = seed;
  std::vector<CostBreakdown> slots;
  slots.reserve(cfg.horizon);
  for (std::int64_t t = 0; t < cfg.horizon; ++t) {
    SlotMetrics m = step(st, cfg, pt, kind);
    slots.push_back(m.cost);
    rep.per_slot.push_back(std::move(m));
  }

  rep.average_total = cost::average_objective(slots);
  CostBreakdown& avg = rep.component_averages;
  for (const CostBreakdown& b : slots) {
    avg.switching += b.switching;
    avg.transmission += b.transmission;
    avg.computing += b.computing;
    avg.accuracy_loss += b.accuracy_loss;
    avg.cloud += b.cloud;
  }
  double t = static_cast<double>(slots.size());
  avg.switching /= t;
  avg.transmission /= t;
  avg.computing /= t;
  avg.accuracy_loss /= t;
  avg.cloud /= t;
  avg.total = rep.average_total;

  std::int64_t tail = (cfg.horizon + 4) / 5;
  double sw = 0.0, tot = 0.0;
  for (std::int64_t s = cfg.horizon - tail; s < cfg.horizon; ++s) {
    sw += slots[s].switching;
    tot += slots[s].total;
  }
  rep.switching_share = tot > 0.0 ? sw / tot : 0.0;
  return rep;
}

ScenarioConfig materialize_axis(const ScenarioConfig& cfg,
                                const std::string& axis, double value) {
  auto require_int = [&](double lo) {
    if (!(value >= lo) || std::floor(value) != value)
      throw ValidationError("sweep " + axis + ": value must be an integer >= " +
                            std::to_string(static_cast<long long>(lo)));
  };
  ScenarioConfig out = cfg;
  if (axis == "horizon") {
    require_int(1);
    out.horizon = static_cast<std::int64_t>(value);
  } else if (axis == "num_services") {
    require_int(1);
    int target = static_cast<int>(value);
    int base = static_cast<int>(cfg.services.size());
    out.services.clear();
    for (int j = 0; j < target; ++j) {
      ServiceProfile s = cfg.services[j % base];
      if (j >= base) s.id += "#" + std::to_string(j / base);
      out.services.push_back(std::move(s));
    }
  } else if (axis == "gpu_count") {
    require_int(1);
    for (ServerProfile& s : out.servers)
      s.gpu_count = static_cast<int>(value);
  } else if (axis == "vanish") {
    if (!(value >= 0))
      throw ValidationError("sweep vanish: value must be >= 0");
    for (ModelProfile& m : out.models) m.vanish = value;
  } else if (axis == "window") {
    require_int(0);
    for (ModelProfile& m : out.models) m.window = value;
  } else {
    throw ValidationError("sweep: unknown axis '" + axis +
                          "' (valid: horizon, num_services, gpu_count, "
                          "vanish, window)");
  }
  return out;
}

namespace {

void append_block(SweepReport& rep, const ScenarioConfig& cfg, double value,
                  const std::vector<PolicyKind>& policies,
                  const std::vector<std::uint64_t>& seeds) {
  for (PolicyKind kind : policies) {
    std::size_t first = rep.runs.size();
    for (std::uint64_t seed : seeds) {
      SweepEntry entry;
      entry.axis_value = value;
      entry.policy = kind;
      entry.seed = seed;
      entry.report = run(cfg, kind, seed);
      rep.runs.push_back(std::move(entry));
    }

    SweepCell cell;
    cell.axis_value = value;
    cell.policy = kind;
    double k = static_cast<double>(seeds.size());
    auto each = [&](auto&& f) {
      for (std::size_t j = first; j < rep.runs.size(); ++j)
        f(rep.runs[j].report);
    };
    each([&](const RunReport& r) {
      cell.mean.switching += r.component_averages.switching / k;
      cell.mean.transmission += r.component_averages.transmission / k;
      cell.mean.computing += r.component_averages.computing / k;
      cell.mean.accuracy_loss += r.component_averages.accuracy_loss / k;
      cell.mean.cloud += r.component_averages.cloud / k;
      cell.mean.total += r.average_total / k;
    });
    if (seeds.size() > 1) {
      each([&](const RunReport& r) {
        auto sq = [](double d) { return d * d; };
        cell.stddev.switching +=
            sq(r.component_averages.switching - cell.mean.switching);
        cell.stddev.transmission +=
            sq(r.component_averages.transmission - cell.mean.transmission);
        cell.stddev.computing +=
            sq(r.component_averages.computing - cell.mean.computing);
        cell.stddev.accuracy_loss +=
            sq(r.component_averages.accuracy_loss - cell.mean.accuracy_loss);
        cell.stddev.cloud += sq(r.component_averages.cloud - cell.mean.cloud);
        cell.stddev.total += sq(r.average_total - cell.mean.total);
      });
      auto fin = [&](double s) { return std::sqrt(s / (k - 1.0)); };
      cell.stddev.switching = fin(cell.stddev.switching);
      cell.stddev.transmission = fin(cell.stddev.transmission);
      cell.stddev.computing = fin(cell.stddev.computing);
      cell.stddev.accuracy_loss = fin(cell.stddev.accuracy_loss);
      cell.stddev.cloud = fin(cell.stddev.cloud);
      cell.stddev.total = fin(cell.stddev.total);
    }
    rep.cells.push_back(std::move(cell));
  }
}

}  // namespace

SweepReport sweep(const ScenarioConfig& cfg,
                  const std::vector<PolicyKind>& policies,
                  const std::string& axis, const std::vector<double>& values,
                  const std::vector<std::uint64_t>& seeds) {
  if (policies.empty() || values.empty() || seeds.empty())
    throw std::invalid_argument(
        "sweep: policies, values, and seeds must be non-empty");

  SweepReport rep;
  rep.axis = axis;
  for (double value : values) {
    ScenarioConfig materialized = materialize_axis(cfg, axis, value);
    append_block(rep, materialized, value, policies, seeds);
  }
  return rep;
}

SweepReport run_many(const ScenarioConfig& cfg,
                     const std::vector<PolicyKind>& policies,
                     const std::vector<std::uint64_t>& seeds) {
  if (policies.empty() || seeds.empty())
    throw std::invalid_argument("run_many: policies and seeds must be non-empty");
  SweepReport rep;
  append_block(rep, cfg, 0.0, policies, seeds);
  return rep;
}

}  // namespace aocsim
