// SPDX-License-Identifier: Apache-2.0
#pragma once

// Named figure presets, the key = value config format, and the scenario
// runner behind the CLI and the C API.

#include <cstdint>
#include <string>
#include <vector>

#include "circqft/dynamics.hpp"
#include "circqft/ioncoup.hpp"

namespace circqft {

enum class ScenarioKind {
  spectrum,
  gate_fidelity,
  adiabatic_fidelity,
  entangle_sweep,
  counter_driving,
  ion_couplings,
};

const char* to_string(ScenarioKind kind);
/// Throws ConfigError for unknown names.
ScenarioKind parse_kind(const std::string& name);
const char* to_string(Scheme scheme);

struct SweepSpec {
  std::string parameter = "omega";  // omega, J01 or J0 of the drive schedule
  double from = 0, to = 0;          // rad/ms
  std::size_t points = 61;
  double gate_time = 0.31;          // ms
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::spectrum;
  std::string name = "custom";
  Scheme scheme = Scheme::offset;
  OffsetSchedule offset;
  RabiSchedule rabi;
  bool has_sweep = false;
  SweepSpec sweep;
  bool has_ions = false;
  ModeSet modes;
  DriveParams drive;
  std::size_t samples = 2000;
  bool with_cd = false;
  std::uint64_t seed = 1;
};

struct Preset {
  std::string name;
  std::string summary;
  Scenario scenario;
};

/// Fixed order: fig3, fig4, fig4-raw, fig5, fig6a, fig6b, fig6c, fig7-blue,
/// fig7-cyan, fig7-red, ion-demo.
const std::vector<Preset>& presets();
/// Throws ConfigError listing the available names.
const Preset& find_preset(const std::string& name);
/// Human-readable parameter dump in kHz (value / 2 pi) with derived t_max.
std::string describe_preset(const Preset& p);

/// Throws ConfigError naming the line for syntax errors, unknown or missing keys.
Scenario parse_config(const std::string& text);
Scenario load_config(const std::string& path);
std::string serialize_config(const Scenario& s);
std::string export_json(const Scenario& s);

/// Checks the parameters against the preconditions of the target module.
void validate(const Scenario& s);

struct ScenarioResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string diagnostics_json;
  std::vector<std::string> warnings;
};

ScenarioResult run_scenario(const Scenario& s);

/// 12 significant digits, '.' separator, LF endings, header first.
std::string format_csv(const ScenarioResult& r);
std::string format_number(double v);
/// Shortest text that parses back to the same double.
std::string format_roundtrip(double v);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

/// CSV at `path` plus a `path.meta.json` sidecar with the scenario, seed and
/// diagnostics.
void write_outputs(const Scenario& s, const ScenarioResult& r, const std::string& path);

}  // namespace circqft
