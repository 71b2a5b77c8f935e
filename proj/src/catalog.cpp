#include "aocsim/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_map>

namespace aocsim {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& member(const json& obj, const std::string& where,
                   const std::string& key) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + "." + key, "missing required field");
  return *it;
}

double number(const json& obj, const std::string& where,
              const std::string& key) {
  const json& v = member(obj, where, key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + "." + key, "must be finite");
  return d;
}

double number_or(const json& obj, const std::string& where,
                 const std::string& key, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return number(obj, where, key);
}

std::string text(const json& obj, const std::string& where,
                 const std::string& key) {
  const json& v = member(obj, where, key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require(bool ok, const std::string& where, const std::string& bound,
             double got) {
  if (!ok) fail(where, "must be " + bound + " (got " + fmt(got) + ")");
}

void require_integer(double v, const std::string& where) {
  if (std::floor(v) != v) fail(where, "must be an integer (got " + fmt(v) + ")");
}

ModelProfile parse_model(const json& j, const std::string& where) {
  ModelProfile m;
  m.id = text(j, where, "id");
  if (m.id.empty()) fail(where + ".id", "must be non-empty");
  m.group = text(j, where, "group");
  if (m.group.empty()) fail(where + ".group", "must be non-empty");
  m.size = number(j, where, "size");
  require(m.size > 0, where + ".size", "> 0", m.size);
  m.flops_per_request = number(j, where, "flops_per_request");
  require(m.flops_per_request > 0, where + ".flops_per_request", "> 0",
          m.flops_per_request);
  m.window = number(j, where, "window");
  require(m.window >= 0, where + ".window", ">= 0", m.window);
  require_integer(m.window, where + ".window");
  m.acc_zero = number(j, where, "acc_zero");
  require(m.acc_zero >= 0, where + ".acc_zero", ">= 0", m.acc_zero);
  m.acc_one_gain = number(j, where, "acc_one_gain");
  m.alpha = number(j, where, "alpha");
  m.vanish = number(j, where, "vanish");
  require(m.vanish >= 0, where + ".vanish", ">= 0", m.vanish);
  if (j.contains("cloud_unit")) {
    double cu = number(j, where, "cloud_unit");
    require(cu >= 0, where + ".cloud_unit", ">= 0", cu);
    m.cloud_unit = cu;
  }
  if (m.alpha >= 0 && m.window >= 1) {
    double peak =
        m.acc_zero + m.acc_one_gain * std::log2(1.0 + std::pow(m.window, m.alpha));
    if (peak > 100.0 + 1e-9)
      fail(where, "accuracy curve exceeds 100 at the window limit (got " +
                      fmt(peak) + ")");
  }
  return m;
}

ServiceProfile parse_service(const json& j, const std::string& where) {
  ServiceProfile s;
  s.id = text(j, where, "id");
  if (s.id.empty()) fail(where + ".id", "must be non-empty");
  s.preferred_model = text(j, where, "preferred_model");
  s.rate = number(j, where, "rate");
  require(s.rate >= 0, where + ".rate", ">= 0", s.rate);
  if (j.contains("vanish_override")) {
    double v = number(j, where, "vanish_override");
    require(v >= 0, where + ".vanish_override", ">= 0", v);
    s.vanish_override = v;
  }
  return s;
}

ServerProfile parse_server(const json& j, const std::string& where) {
  ServerProfile s;
  s.id = text(j, where, "id");
  if (s.id.empty()) fail(where + ".id", "must be non-empty");
  double count = number(j, where, "gpu_count");
  require(count >= 1, where + ".gpu_count", ">= 1", count);
  require_integer(count, where + ".gpu_count");
  s.gpu_count = static_cast<int>(count);
  s.gpu_memory_gb = number(j, where, "gpu_memory_gb");
  require(s.gpu_memory_gb > 0, where + ".gpu_memory_gb", "> 0", s.gpu_memory_gb);
  s.gpu_gflops = number(j, where, "gpu_gflops");
  require(s.gpu_gflops > 0, where + ".gpu_gflops", "> 0", s.gpu_gflops);
  s.power_w = number(j, where, "power_w");
  require(s.power_w >= 0, where + ".power_w", ">= 0", s.power_w);
  s.efficiency_gflops_per_w = number(j, where, "efficiency_gflops_per_w");
  require(s.efficiency_gflops_per_w >= 0, where + ".efficiency_gflops_per_w",
          ">= 0", s.efficiency_gflops_per_w);
  s.slot_seconds = number_or(j, where, "slot_seconds", 1.0);
  require(s.slot_seconds > 0, where + ".slot_seconds", "> 0", s.slot_seconds);
  return s;
}

CostCoefficients parse_costs(const json& j, const std::string& where) {
  CostCoefficients c;
  c.switch_lambda = number(j, where, "switch_lambda");
  c.trans_unit = number(j, where, "trans_unit");
  c.cloud_unit = number(j, where, "cloud_unit");
  c.acc_coeff = number(j, where, "acc_coeff");
  c.compute_coeff = number_or(j, where, "compute_coeff", 1.0);
  c.runtime_mem_per_request = number_or(j, where, "runtime_mem_per_request", 0.0);
  require(c.switch_lambda >= 0, where + ".switch_lambda", ">= 0", c.switch_lambda);
  require(c.trans_unit >= 0, where + ".trans_unit", ">= 0", c.trans_unit);
  require(c.cloud_unit >= 0, where + ".cloud_unit", ">= 0", c.cloud_unit);
  require(c.acc_coeff >= 0, where + ".acc_coeff", ">= 0", c.acc_coeff);
  require(c.compute_coeff >= 0, where + ".compute_coeff", ">= 0", c.compute_coeff);
  require(c.runtime_mem_per_request >= 0, where + ".runtime_mem_per_request",
          ">= 0", c.runtime_mem_per_request);
  return c;
}

}  // namespace

ScenarioConfig validate_scenario(const json& raw,
                                 std::vector<std::string>* warnings) {
  ScenarioConfig cfg;
  if (!raw.is_object()) fail("scenario", "expected a top-level object");

  double horizon = number(raw, "scenario", "horizon");
  require(horizon >= 1, "scenario.horizon", ">= 1", horizon);
  require_integer(horizon, "scenario.horizon");
  cfg.horizon = static_cast<std::int64_t>(horizon);

  const json& seed = member(raw, "scenario", "seed");
  if (!seed.is_number_unsigned() &&
      !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
    fail("scenario.seed", "expected a non-negative integer");
  cfg.seed = seed.get<std::uint64_t>();

  const json& models = member(raw, "scenario", "models");
  if (!models.is_array() || models.empty())
    fail("scenario.models", "expected a non-empty array");
  std::unordered_map<std::string, int> model_index;
  for (std::size_t k = 0; k < models.size(); ++k) {
    std::string where = "models[" + std::to_string(k) + "]";
    ModelProfile m = parse_model(models[k], where);
    if (!model_index.emplace(m.id, static_cast<int>(k)).second)
      fail(where + ".id", "duplicate model id '" + m.id + "'");
    cfg.models.push_back(std::move(m));
  }

  const json& services = member(raw, "scenario", "services");
  if (!services.is_array() || services.empty())
    fail("scenario.services", "expected a non-empty array");
  std::set<std::string> service_ids;
  for (std::size_t k = 0; k < services.size(); ++k) {
    std::string where = "services[" + std::to_string(k) + "]";
    ServiceProfile s = parse_service(services[k], where);
    if (!service_ids.insert(s.id).second)
      fail(where + ".id", "duplicate service id '" + s.id + "'");
    auto it = model_index.find(s.preferred_model);
    if (it == model_index.end())
      fail(where + ".preferred_model",
           "references unknown model '" + s.preferred_model + "'");
    s.preferred_index = it->second;
    cfg.services.push_back(std::move(s));
  }

  const json& servers = member(raw, "scenario", "servers");
  if (!servers.is_array() || servers.empty())
    fail("scenario.servers", "expected a non-empty array");
  std::set<std::string> server_ids;
  double min_model_size = cfg.models.front().size;
  for (const ModelProfile& m : cfg.models)
    min_model_size = std::min(min_model_size, m.size);
  for (std::size_t k = 0; k < servers.size(); ++k) {
    std::string where = "servers[" + std::to_string(k) + "]";
    ServerProfile s = parse_server(servers[k], where);
    if (!server_ids.insert(s.id).second)
      fail(where + ".id", "duplicate server id '" + s.id + "'");
    if (warnings && min_model_size > s.memory_gb())
      warnings->push_back(where + ": no model fits in " + fmt(s.memory_gb()) +
                          " GB; everything will be cloud-served");
    if (warnings && s.energy_budget_gflops() <= 0)
      warnings->push_back(where +
                          ": zero per-slot energy budget; no edge serving possible");
    cfg.servers.push_back(std::move(s));
  }

  cfg.costs = parse_costs(member(raw, "scenario", "costs"), "costs");
  return cfg;
}

nlohmann::json scenario_to_json(const ScenarioConfig& config) {
  json j;
  j["horizon"] = config.horizon;
  j["seed"] = config.seed;
  j["models"] = json::array();
  for (const ModelProfile& m : config.models) {
    json jm{{"id", m.id},
            {"group", m.group},
            {"size", m.size},
            {"flops_per_request", m.flops_per_request},
            {"window", m.window},
            {"acc_zero", m.acc_zero},
            {"acc_one_gain", m.acc_one_gain},
            {"alpha", m.alpha},
            {"vanish", m.vanish}};
    if (m.cloud_unit) jm["cloud_unit"] = *m.cloud_unit;
    j["models"].push_back(std::move(jm));
  }
  j["services"] = json::array();
  for (const ServiceProfile& s : config.services) {
    json js{{"id", s.id}, {"preferred_model", s.preferred_model}, {"rate", s.rate}};
    if (s.vanish_override) js["vanish_override"] = *s.vanish_override;
    j["services"].push_back(std::move(js));
  }
  j["servers"] = json::array();
  for (const ServerProfile& s : config.servers) {
    j["servers"].push_back(json{{"id", s.id},
                                {"gpu_count", s.gpu_count},
                                {"gpu_memory_gb", s.gpu_memory_gb},
                                {"gpu_gflops", s.gpu_gflops},
                                {"power_w", s.power_w},
                                {"efficiency_gflops_per_w",
                                 s.efficiency_gflops_per_w},
                                {"slot_seconds", s.slot_seconds}});
  }
  j["costs"] = json{
      {"switch_lambda", config.costs.switch_lambda},
      {"trans_unit", config.costs.trans_unit},
      {"cloud_unit", config.costs.cloud_unit},
      {"acc_coeff", config.costs.acc_coeff},
      {"compute_coeff", config.costs.compute_coeff},
      {"runtime_mem_per_request", config.costs.runtime_mem_per_request}};
  return j;
}

std::vector<ModelProfile> default_catalog() {
  // The gpt accuracy curves are measured values; the other four profiles are
  // representative stand-ins calibrated so that edge serving is worthwhile
  // for them under the default cost coefficients (see README).
  auto model = [](const char* id, const char* group, double size, double flops,
                  double a0, double a1, double alpha) {
    ModelProfile m;
    m.id = id;
    m.group = group;
    m.size = size;
    m.flops_per_request = flops;
    m.window = 2048;
    m.acc_zero = a0;
    m.acc_one_gain = a1;
    m.alpha = alpha;
    m.vanish = 0.25;
    return m;
  };
  return {
      model("gpt-13b", "gpt", 40, 2600, 15.45, 11.8, 0.0923),
      model("gpt-175b", "gpt", 400, 35000, 22.03, 7.59, 0.1565),
      model("uniformer-base", "uniformer", 60, 300, 88.0, 2.2, 0.30),
      model("uniformer-large", "uniformer", 110, 800, 90.5, 1.8, 0.32),
      model("clip-base", "clip", 50, 160, 89.5, 2.0, 0.28),
      model("clip-large", "clip", 90, 600, 89.0, 2.1, 0.26),
  };
}

ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  cfg.horizon = 100;
  cfg.seed = 1;
  cfg.models = default_catalog();

  ServerProfile server;
  server.id = "edge-0";
  server.gpu_count = 8;
  server.gpu_memory_gb = 80;
  server.gpu_gflops = 312000;
  server.power_w = 300;
  server.efficiency_gflops_per_w = 810;
  server.slot_seconds = 1;
  cfg.servers.push_back(server);

  for (int i = 0; i < 30; ++i) {
    ServiceProfile s;
    char buf[16];
    std::snprintf(buf, sizeof buf, "svc-%02d", i);
    s.id = buf;
    s.preferred_index = i % static_cast<int>(cfg.models.size());
    s.preferred_model = cfg.models[s.preferred_index].id;
    s.rate = 1.0;
    cfg.services.push_back(std::move(s));
  }

  cfg.costs.switch_lambda = 0.0001;
  cfg.costs.trans_unit = 0.0001;
  cfg.costs.cloud_unit = 0.0015;
  cfg.costs.acc_coeff = 0.01;
  cfg.costs.compute_coeff = 1.0;
  cfg.costs.runtime_mem_per_request = 0.0;
  return cfg;
}

}  // namespace aocsim
