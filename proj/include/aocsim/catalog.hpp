#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace aocsim {

// Static description of one foundation model. Sizes are GB, compute is
// GFLOPs per request, accuracy parameters are percentage points.
struct ModelProfile {
  std::string id;
  std::string group;  // models sharing a group are mutually substitutable
  double size = 0.0;
  double flops_per_request = 0.0;
  double window = 0.0;
  double acc_zero = 0.0;
  double acc_one_gain = 0.0;
  double alpha = 0.0;
  double vanish = 0.0;
  std::optional<double> cloud_unit;  // per-model cloud price override
};

struct ServiceProfile {
  std::string id;
  std::string preferred_model;
  double rate = 0.0;  // Poisson mean requests per slot
  std::optional<double> vanish_override;
  int preferred_index = -1;  // resolved by validate_scenario
};

struct ServerProfile {
  std::string id;
  int gpu_count = 0;
  double gpu_memory_gb = 0.0;
  double gpu_gflops = 0.0;
  double power_w = 0.0;
  double efficiency_gflops_per_w = 0.0;
  double slot_seconds = 1.0;

  double memory_gb() const { return gpu_count * gpu_memory_gb; }
  double gflops() const { return gpu_count * gpu_gflops; }
  // compute volume servable per slot within the power envelope, in GFLOPs
  double energy_budget_gflops() const {
    return power_w * efficiency_gflops_per_w * slot_seconds;
  }
};

struct CostCoefficients {
  double switch_lambda = 0.0;
  double trans_unit = 0.0;
  double cloud_unit = 0.0;
  double acc_coeff = 0.0;
  double compute_coeff = 1.0;
  double runtime_mem_per_request = 0.0;
};

struct ScenarioConfig {
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<ServerProfile> servers;
  std::vector<ModelProfile> models;
  std::vector<ServiceProfile> services;
  CostCoefficients costs;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checks every field bound and reference, applies defaults (slot_seconds,
// compute_coeff, runtime_mem_per_request), and resolves preferred-model
// indices. Throws ValidationError naming the offending field. Non-fatal
// conditions (a server too small for any model, a zero energy budget) are
// appended to warnings when provided.
ScenarioConfig validate_scenario(const nlohmann::json& raw,
                                 std::vector<std::string>* warnings = nullptr);

// Inverse of validation: emits the document form with all defaults
// materialized. Numeric values round-trip bit-exactly.
nlohmann::json scenario_to_json(const ScenarioConfig& config);

// Six models in three substitution groups. The two gpt entries carry
// measured accuracy-curve parameters; the rest are representative profiles
// (see README). Sizes deliberately exceed one default server's memory.
std::vector<ModelProfile> default_catalog();

// The documented default experiment: 100 slots, 30 services over the
// default catalog, one 8-GPU server.
ScenarioConfig default_scenario();

}  // namespace aocsim
