#pragma once

#include <iosfwd>
#include <string>

#include "aocsim/engine.hpp"

namespace aocsim {

// %.9g rendering for every numeric CSV field.
std::string format_sig9(double v);

// summary.csv holds one row per run (slot column "avg"); per_slot.csv holds
// every slot of every run followed by that run's summary row. Rows appear in
// (axis value, policy, seed) order, so identical inputs reproduce identical
// bytes. The axis_value column is empty for plain (non-sweep) runs.
void write_csv(const SweepReport& rep, const std::string& dir);

// results.json: one top-level key per policy with an array of run objects
// (per-slot detail included), plus the per-cell aggregate summary.
void write_json(const SweepReport& rep, const std::string& dir);

// Short per-cell digest for stdout.
void write_summary_table(const SweepReport& rep, std::ostream& os);

// Writes the default scenario document; the emitted file re-validates
// cleanly and re-emitting the validated config reproduces it byte for byte.
void emit_default_scenario(const std::string& path);

}  // namespace aocsim
