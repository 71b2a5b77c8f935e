#include "aocsim/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "aocsim/catalog.hpp"

namespace aocsim {
namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  return out;
}

void csv_row(std::ostream& os, const std::string& axis_value,
             const std::string& policy, std::uint64_t seed,
             const std::string& slot, const CostBreakdown& b) {
  os << axis_value << ',' << policy << ',' << seed << ',' << slot << ','
     << format_sig9(b.switching) << ',' << format_sig9(b.transmission) << ','
     << format_sig9(b.computing) << ',' << format_sig9(b.accuracy_loss) << ','
     << format_sig9(b.cloud) << ',' << format_sig9(b.total) << '\n';
}

constexpr const char* kCsvHeader =
    "axis_value,policy,seed,slot,switching,transmission,computing,"
    "accuracy_loss,cloud,total\n";

json breakdown_to_json(const CostBreakdown& b) {
  return json{{"switching", b.switching},
              {"transmission", b.transmission},
              {"computing", b.computing},
              {"accuracy_loss", b.accuracy_loss},
              {"cloud", b.cloud},
              {"total", b.total}};
}

}  // namespace

std::string format_sig9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv(const SweepReport& rep, const std::string& dir) {
  std::filesystem::path base(dir);
  std::filesystem::create_directories(base);
  std::ofstream summary = open_out(base / "summary.csv");
  std::ofstream per_slot = open_out(base / "per_slot.csv");
  summary << kCsvHeader;
  per_slot << kCsvHeader;

  for (const SweepEntry& e : rep.runs) {
    std::string axis_value =
        rep.axis.empty() ? std::string() : format_sig9(e.axis_value);
    std::string policy = policy_name(e.policy);
    CostBreakdown avg = e.report.component_averages;
    for (const SlotMetrics& m : e.report.per_slot)
      csv_row(per_slot, axis_value, policy, e.seed, std::to_string(m.slot),
              m.cost);
    csv_row(per_slot, axis_value, policy, e.seed, "avg", avg);
    csv_row(summary, axis_value, policy, e.seed, "avg", avg);
  }
}

void write_json(const SweepReport& rep, const std::string& dir) {
  std::filesystem::path base(dir);
  std::filesystem::create_directories(base);

  json root = json::object();
  if (!rep.axis.empty()) root["axis"] = rep.axis;
  for (const SweepEntry& e : rep.runs) {
    json run_obj;
    if (!rep.axis.empty()) run_obj["axis_value"] = e.axis_value;
    run_obj["seed"] = e.seed;
    run_obj["average_total"] = e.report.average_total;
    run_obj["switching_share"] = e.report.switching_share;
    run_obj["component_averages"] =
        breakdown_to_json(e.report.component_averages);
    json slots = json::array();
    for (const SlotMetrics& m : e.report.per_slot) {
      json jm = breakdown_to_json(m.cost);
      jm["slot"] = m.slot;
      jm["generated"] = m.generated;
      jm["edge_served"] = m.edge_served;
      jm["cloud_served"] = m.cloud_served;
      jm["total_context"] = m.total_context;
      json cached = json::array();
      for (const auto& server_pairs : m.cached)
        cached.push_back(server_pairs);
      jm["cached"] = std::move(cached);
      slots.push_back(std::move(jm));
    }
    run_obj["per_slot"] = std::move(slots);
    root[policy_name(e.policy)].push_back(std::move(run_obj));
  }

  json cells = json::array();
  for (const SweepCell& c : rep.cells) {
    json jc{{"policy", policy_name(c.policy)},
            {"mean", breakdown_to_json(c.mean)},
            {"stddev", breakdown_to_json(c.stddev)}};
    if (!rep.axis.empty()) jc["axis_value"] = c.axis_value;
    cells.push_back(std::move(jc));
  }
  root["aggregates"] = std::move(cells);

  std::ofstream out = open_out(std::filesystem::path(dir) / "results.json");
  out << root.dump(2) << '\n';
}

void write_summary_table(const SweepReport& rep, std::ostream& os) {
  for (const SweepCell& c : rep.cells) {
    os << policy_name(c.policy);
    if (!rep.axis.empty())
      os << " @ " << rep.axis << '=' << format_sig9(c.axis_value);
    os << ": total " << format_sig9(c.mean.total);
    if (c.stddev.total > 0) os << " (sd " << format_sig9(c.stddev.total) << ")";
    os << " [switch " << format_sig9(c.mean.switching) << ", trans "
       << format_sig9(c.mean.transmission) << ", compute "
       << format_sig9(c.mean.computing) << ", acc "
       << format_sig9(c.mean.accuracy_loss) << ", cloud "
       << format_sig9(c.mean.cloud) << "]\n";
  }
}

void emit_default_scenario(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out = open_out(p);
  out << scenario_to_json(default_scenario()).dump(2) << '\n';
}

}  // namespace aocsim
