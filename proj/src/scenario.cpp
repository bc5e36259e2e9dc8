#include "biphoton/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "biphoton/constants.hpp"

namespace biphoton {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& value, const std::string& where) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("scenario value '" + value + "' for " + where +
                                " is not a number");
  }
}

// Consumes the known keys of one section and rejects the rest.
class SectionReader {
 public:
  SectionReader(const ScenarioConfig& cfg, std::string section)
      : section_(std::move(section)) {
    auto it = cfg.sections.find(section_);
    if (it != cfg.sections.end()) keys_ = it->second;
  }

  double number(const std::string& key, double fallback) {
    auto it = keys_.find(key);
    if (it == keys_.end()) return fallback;
    const double v = to_double(it->second, "[" + section_ + "] " + key);
    keys_.erase(it);
    return v;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    auto it = keys_.find(key);
    if (it == keys_.end()) return fallback;
    std::string v = it->second;
    keys_.erase(it);
    return v;
  }

  bool has(const std::string& key) const { return keys_.count(key) != 0; }

  void finish() {
    if (keys_.empty()) return;
    std::string msg = "unknown key(s) in scenario section [" + section_ + "]:";
    for (const auto& [k, v] : keys_) msg += " " + k;
    throw std::invalid_argument(msg);
  }

 private:
  std::string section_;
  std::map<std::string, std::string> keys_;
};

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ScenarioConfig parse_scenario(const std::string& body, const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.content_hash = fnv1a64(body);
  std::istringstream in(body);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                    ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                  ": expected 'key = value' inside a section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                  ": empty key");
    }
    if (!cfg.sections[section].emplace(key, value).second) {
      throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

ScenarioConfig builtin_scenario() {
  ScenarioConfig cfg;
  cfg.name = "builtin";
  cfg.content_hash = fnv1a64("");
  return cfg;
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  std::vector<fs::path> candidates;
  candidates.emplace_back(name_or_path);
  if (const char* dir = std::getenv("BIPHOTON_SCENARIO_DIR")) {
    candidates.emplace_back(fs::path(dir) / (name_or_path + ".ini"));
  }
  candidates.emplace_back(fs::path("scenarios") / (name_or_path + ".ini"));
  for (const auto& path : candidates) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) continue;
    std::ifstream in(path, std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    // display name: basename without the .ini suffix
    std::string display = path.stem().string();
    return parse_scenario(body.str(), display);
  }
  throw std::invalid_argument(
      "scenario '" + name_or_path +
      "' not found (tried the literal path, $BIPHOTON_SCENARIO_DIR and ./scenarios)");
}

PumpSpec pump_from(const ScenarioConfig& cfg) {
  SectionReader r(cfg, "pump");
  PumpSpec p;
  p.wavelength_p = r.number("wavelength_nm", 351.1) * 1e-9;
  p.beam_diameter_a = r.number("beam_diameter_um", 100.0) * 1e-6;
  p.power = r.number("power_w", 1.0);
  r.finish();
  if (!(p.wavelength_p > 0.0) || !(p.beam_diameter_a > 0.0) || p.power < 0.0) {
    throw std::invalid_argument("[pump] requires positive wavelength and diameter");
  }
  return p;
}

CrystalSpec crystal_from(const ScenarioConfig& cfg, const PumpSpec& pump) {
  SectionReader r(cfg, "crystal");
  CrystalSpec c;
  c.name = r.text("name", "BBO");
  c.length_l = r.number("length_mm", 5.0) * 1e-3;
  c.ordinary = bbo_ordinary_set();
  c.extraordinary = bbo_extraordinary_set();
  c.ordinary.b0 = r.number("o_b0", c.ordinary.b0);
  c.ordinary.b1_um2 = r.number("o_b1_um2", c.ordinary.b1_um2);
  c.ordinary.b2_um2 = r.number("o_b2_um2", c.ordinary.b2_um2);
  c.ordinary.b3_per_um2 = r.number("o_b3_per_um2", c.ordinary.b3_per_um2);
  c.extraordinary.b0 = r.number("e_b0", c.extraordinary.b0);
  c.extraordinary.b1_um2 = r.number("e_b1_um2", c.extraordinary.b1_um2);
  c.extraordinary.b2_um2 = r.number("e_b2_um2", c.extraordinary.b2_um2);
  c.extraordinary.b3_per_um2 = r.number("e_b3_per_um2", c.extraordinary.b3_per_um2);
  const std::string cut = r.text("cut", r.has("cut_angle_deg") ? "explicit" : "degenerate");
  const double cut_deg = r.number("cut_angle_deg", 0.0);
  r.finish();
  validate_sellmeier(c.ordinary, "[crystal] ordinary set");
  validate_sellmeier(c.extraordinary, "[crystal] extraordinary set");
  if (!(c.length_l > 0.0)) throw std::invalid_argument("[crystal] length must be positive");
  if (cut == "degenerate") {
    c.cut_angle_alpha = degenerate_cut_angle(pump, c);
  } else if (cut == "explicit") {
    c.cut_angle_alpha = cut_deg * constants::pi / 180.0;
  } else {
    throw std::invalid_argument("[crystal] cut must be 'degenerate' or omitted "
                                "with cut_angle_deg given");
  }
  if (!(c.cut_angle_alpha > 0.0 && c.cut_angle_alpha < constants::pi / 2.0)) {
    throw std::invalid_argument("[crystal] cut angle must lie in (0, 90) degrees");
  }
  return c;
}

ImagingSystem imaging_from(const ScenarioConfig& cfg) {
  SectionReader r(cfg, "imaging");
  const double f = r.number("focal_length_mm", 50.0) * 1e-3;
  r.finish();
  if (!(f > 0.0)) throw std::invalid_argument("[imaging] focal length must be positive");
  return ImagingSystem::one_to_one(f);
}

DetectionProcess detection_from(const ScenarioConfig& cfg) {
  SectionReader r(cfg, "detection");
  DetectionProcess p;
  p.eta2 = r.number("eta2", 1.0);
  r.finish();
  if (!(p.eta2 >= 0.0 && p.eta2 <= 1.0)) {
    throw std::invalid_argument("[detection] eta2 must lie in [0, 1]");
  }
  return p;
}

namespace {

RadiationField field_from(const ScenarioConfig& cfg, const std::string& section,
                          FieldKind kind, double default_solid_angle,
                          double default_bandwidth) {
  SectionReader r(cfg, section);
  RadiationField f;
  f.kind = kind;
  f.intensity_I = r.number("intensity_w_m2", 5.0);
  f.lambda = r.number("wavelength_nm", 702.0) * 1e-9;
  f.solid_angle = r.number("solid_angle_sr", default_solid_angle);
  f.bandwidth = r.number("bandwidth_rad_s", default_bandwidth);
  r.finish();
  if (!(f.intensity_I >= 0.0 && f.lambda > 0.0 && f.solid_angle > 0.0 &&
        f.bandwidth > 0.0)) {
    throw std::invalid_argument("[" + section + "] requires positive field parameters");
  }
  return f;
}

}  // namespace

RadiationField coherent_field_from(const ScenarioConfig& cfg) {
  return field_from(cfg, "coherent_field", FieldKind::Coherent, 3e-4, 4e13);
}

RadiationField spdc_field_from(const ScenarioConfig& cfg) {
  return field_from(cfg, "spdc_field", FieldKind::Biphoton, 1.2e-2, 7.7e14);
}

std::pair<double, double> detection_volume_from(const ScenarioConfig& cfg) {
  SectionReader r(cfg, "detection_volume");
  const double a = r.number("cross_section_m2", 7.853981633974483e-9);
  const double l = r.number("length_mm", 5.0) * 1e-3;
  r.finish();
  if (!(a > 0.0 && l > 0.0)) {
    throw std::invalid_argument("[detection_volume] requires positive A and L");
  }
  return {a, l};
}

TrapModel traps_from(const ScenarioConfig& cfg) {
  SectionReader r(cfg, "traps");
  TrapModel m = default_trap_model();
  m.trap1.lifetime = r.number("tau1_s", m.trap1.lifetime);
  m.trap2.lifetime = r.number("tau2_s", m.trap2.lifetime);
  m.trap1.capacity = r.number("capacity1", m.trap1.capacity);
  m.trap2.capacity = r.number("capacity2", m.trap2.capacity);
  m.trap1.fill_coeff = r.number("fill1_m2_per_w_s", m.trap1.fill_coeff);
  m.trap2.fill_coeff = r.number("fill2_m2_per_w_s", m.trap2.fill_coeff);
  m.gain1 = r.number("gain1", m.gain1);
  m.gain2 = r.number("gain2", m.gain2);
  m.base_sensitivity = r.number("s0", m.base_sensitivity);
  r.finish();
  return m;
}

ScheduleSpec schedule_from(const ScenarioConfig& cfg) {
  SectionReader r(cfg, "schedule");
  ScheduleSpec s;
  s.on_intensity = r.number("on_intensity_w_m2", s.on_intensity);
  s.on_duration_s = r.number("on_duration_s", s.on_duration_s);
  s.horizon_s = r.number("horizon_s", s.horizon_s);
  s.step_s = r.number("step_s", s.step_s);
  r.finish();
  return s;
}

ResponseScanSpec response_from(const ScenarioConfig& cfg) {
  SectionReader r(cfg, "response");
  ResponseScanSpec s;
  s.spot_diameter = r.number("spot_diameter_um", s.spot_diameter * 1e6) * 1e-6;
  s.rayleigh_length = r.number("rayleigh_mm", s.rayleigh_length * 1e3) * 1e-3;
  s.power = r.number("power_nw", s.power * 1e9) * 1e-9;
  s.gain = r.number("gain", s.gain);
  r.finish();
  return s;
}

}  // namespace biphoton
