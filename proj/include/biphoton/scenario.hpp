#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "biphoton/dispersion.hpp"
#include "biphoton/kinetics.hpp"
#include "biphoton/overlap.hpp"
#include "biphoton/phasematch.hpp"
#include "biphoton/rates.hpp"

namespace biphoton {

// Flat key-value sections parsed from an INI-style file. Keys carry their
// units as suffixes (length_mm, bandwidth_rad_s, ...). A subcommand
// validates only the sections it consumes; unknown keys inside a consumed
// section are rejected.
struct ScenarioConfig {
  std::string name = "builtin";
  std::uint64_t content_hash = 0;
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has_section(const std::string& s) const {
    return sections.count(s) != 0;
  }
};

// FNV-1a 64-bit, used for the scenario hash recorded in output headers.
std::uint64_t fnv1a64(const std::string& bytes);

// Parses an INI file body. Throws std::invalid_argument with a line number
// on malformed input.
ScenarioConfig parse_scenario(const std::string& body, const std::string& name);

// Resolves `name_or_path`: an existing path is loaded directly; otherwise
// <name>.ini is searched in $BIPHOTON_SCENARIO_DIR, then ./scenarios.
ScenarioConfig load_scenario(const std::string& name_or_path);

// Built-in defaults (no file): empty sections, every *_from getter returns
// its default object.
ScenarioConfig builtin_scenario();

// Typed section accessors. Each consumes its section if present (rejecting
// unknown keys) and falls back to the documented defaults otherwise.
PumpSpec pump_from(const ScenarioConfig& cfg);
// Needs the pump because `cut = degenerate` (the default) solves the
// collinear degenerate condition for this pump.
CrystalSpec crystal_from(const ScenarioConfig& cfg, const PumpSpec& pump);
ImagingSystem imaging_from(const ScenarioConfig& cfg);
DetectionProcess detection_from(const ScenarioConfig& cfg);
RadiationField coherent_field_from(const ScenarioConfig& cfg);
RadiationField spdc_field_from(const ScenarioConfig& cfg);
// cross-section (m^2) and length (m) of the detection volume
std::pair<double, double> detection_volume_from(const ScenarioConfig& cfg);
TrapModel traps_from(const ScenarioConfig& cfg);
// on-intensity, on-duration, horizon, step (all SI)
struct ScheduleSpec {
  double on_intensity = 1.4551309082687576;  // 1.4 nW in a 35 um spot
  double on_duration_s = 400.0;
  double horizon_s = 800.0;
  double step_s = 0.5;
};
ScheduleSpec schedule_from(const ScenarioConfig& cfg);
struct ResponseScanSpec {
  double spot_diameter = 35e-6;      // m
  double rayleigh_length = 1.4802e-3;  // m
  double power = 1.4e-9;             // W
  double gain = 1.0;
};
ResponseScanSpec response_from(const ScenarioConfig& cfg);

}  // namespace biphoton
