#include "aocsim/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aocsim/catalog.hpp"
#include "aocsim/engine.hpp"
#include "aocsim/output.hpp"

namespace aocsim {
namespace {

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = s.find(delim, start);
    out.push_back(s.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << '\n';
  return 1;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

constexpr const char* kAxes[] = {"horizon", "num_services", "gpu_count",
                                 "vanish", "window"};

}  // namespace

int run_main(int argc, const char* const* argv) {
  CLI::App app{"edge model-caching and request-offloading simulator"};

  std::string config_path, policy_spec, sweep_spec, emit_default_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::int64_t seeds_n = 0;

  app.add_option("--config", config_path, "scenario document (JSON)");
  app.add_option("--policy", policy_spec,
                 "comma-separated policies: lc, fifo, lfu, cloud");
  auto* seed_opt =
      app.add_option("--seed", seed, "single seed (default: the scenario's)");
  auto* seeds_opt = app.add_option("--seeds", seeds_n, "run seeds 0..N-1");
  seed_opt->excludes(seeds_opt);
  seeds_opt->excludes(seed_opt);
  app.add_option("--sweep", sweep_spec,
                 "AXIS=V1,V2,... with AXIS one of horizon, num_services, "
                 "gpu_count, vanish, window");
  app.add_option("--out", out_dir, "output directory (default: .)");
  app.add_option("--format", format, "csv or json (default: csv)");
  app.add_option("--emit-default", emit_default_path,
                 "write the default scenario document and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  if (format != "csv" && format != "json")
    return usage_error("--format must be csv or json (got '" + format + "')");

  if (!emit_default_path.empty()) {
    try {
      emit_default_scenario(emit_default_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 3;
    }
    return 0;
  }

  if (config_path.empty())
    return usage_error("--config is required (or use --emit-default PATH)");
  if (policy_spec.empty())
    return usage_error("--policy is required (valid: lc, fifo, lfu, cloud)");

  std::vector<PolicyKind> policies;
  for (const std::string& name : split(policy_spec, ',')) {
    auto kind = parse_policy(name);
    if (!kind)
      return usage_error("unknown policy '" + name +
                         "' (valid: lc, fifo, lfu, cloud)");
    if (std::find(policies.begin(), policies.end(), *kind) == policies.end())
      policies.push_back(*kind);
  }

  std::string axis;
  std::vector<double> values;
  if (!sweep_spec.empty()) {
    std::size_t eq = sweep_spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= sweep_spec.size())
      return usage_error("--sweep expects AXIS=V1,V2,...");
    axis = sweep_spec.substr(0, eq);
    if (std::find(std::begin(kAxes), std::end(kAxes), axis) == std::end(kAxes))
      return usage_error("unknown sweep axis '" + axis +
                         "' (valid: horizon, num_services, gpu_count, "
                         "vanish, window)");
    for (const std::string& tok : split(sweep_spec.substr(eq + 1), ',')) {
      double v = 0.0;
      if (!parse_double(tok, v))
        return usage_error("bad sweep value '" + tok + "'");
      values.push_back(v);
    }
  }

  nlohmann::json doc;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read " << config_path << '\n';
      return 2;
    }
    try {
      in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "error: " << config_path << ": " << e.what() << '\n';
      return 2;
    }
  }

  ScenarioConfig cfg;
  std::vector<std::string> warnings;
  try {
    cfg = validate_scenario(doc, &warnings);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << '\n';
    return 2;
  }
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

  std::vector<std::uint64_t> seeds;
  if (seeds_opt->count() > 0) {
    if (seeds_n < 1) return usage_error("--seeds expects N >= 1");
    for (std::int64_t s = 0; s < seeds_n; ++s)
      seeds.push_back(static_cast<std::uint64_t>(s));
  } else if (seed_opt->count() > 0) {
    seeds.push_back(seed);
  } else {
    seeds.push_back(cfg.seed);
  }

  SweepReport rep;
  try {
    rep = axis.empty() ? run_many(cfg, policies, seeds)
                       : sweep(cfg, policies, axis, values, seeds);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  try {
    if (format == "json")
      write_json(rep, out_dir);
    else
      write_csv(rep, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  write_summary_table(rep, std::cout);
  return 0;
}

}  // namespace aocsim
