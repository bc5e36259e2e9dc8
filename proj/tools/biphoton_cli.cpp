#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "biphoton/amplitude.hpp"
#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/kinetics.hpp"
#include "biphoton/overlap.hpp"
#include "biphoton/phasematch.hpp"
#include "biphoton/rates.hpp"
#include "biphoton/scenario.hpp"
#include "svg.hpp"

namespace {

using namespace biphoton;

constexpr double rad_to_deg = 180.0 / constants::pi;

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct CommonOpts {
  std::string scenario;
  std::string out;
  bool svg = false;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--scenario", c.scenario, "scenario preset name or file path");
  cmd->add_option("--out", c.out, "output file (default: standard output)");
  cmd->add_flag("--svg", c.svg, "write an SVG plot next to the data file");
  cmd->add_option("--seed", c.seed, "seed recorded in the output header");
}

ScenarioConfig resolve_scenario(const CommonOpts& c) {
  return c.scenario.empty() ? builtin_scenario() : load_scenario(c.scenario);
}

// Comma-separated table with '# key=value' metadata lines.
struct Output {
  std::vector<std::pair<std::string, std::string>> meta;
  std::string header;
  std::vector<std::string> rows;

  void add(const std::string& key, const std::string& value) {
    meta.emplace_back(key, value);
  }
  void add(const std::string& key, double value) { add(key, g12(value)); }

  std::string render() const {
    std::string s;
    for (const auto& [k, v] : meta) s += "# " + k + "=" + v + "\n";
    s += header + "\n";
    for (const auto& r : rows) s += r + "\n";
    return s;
  }
};

Output start_output(const std::string& subcommand, const ScenarioConfig& cfg,
                    const CommonOpts& c) {
  Output out;
  out.add("tool", std::string("biphoton ") + constants::tool_version);
  out.add("subcommand", subcommand);
  out.add("scenario", cfg.name);
  char hash[32];
  std::snprintf(hash, sizeof hash, "0x%016llx",
                static_cast<unsigned long long>(cfg.content_hash));
  out.add("scenario_hash", std::string(hash));
  out.add("hbar_J_s", constants::hbar_J_s);
  out.add("c_m_s", constants::c_m_s);
  out.add("seed", g12(static_cast<double>(c.seed)));
  return out;
}

void emit(const Output& out, const CommonOpts& c, const std::string& svg_body) {
  if (c.svg && c.out.empty()) {
    throw std::invalid_argument("--svg requires --out to name the plot file");
  }
  if (c.out.empty()) {
    std::cout << out.render();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file " + c.out);
  f << out.render();
  if (c.svg) {
    std::ofstream s(c.out + ".svg", std::ios::binary);
    if (!s) throw std::invalid_argument("cannot open output file " + c.out + ".svg");
    s << svg_body;
  }
}

std::string basename_of(const std::string& path) {
  const auto pos = path.find_last_of("/\\");
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

// ---------------------------------------------------------------- subcommands

struct TuningArgs {
  double lambda_min_nm = 630.0, lambda_max_nm = 780.0;
  int samples = 100;
};

int run_tuning_curve(const CommonOpts& c, const TuningArgs& a) {
  const auto cfg = resolve_scenario(c);
  const PumpSpec pump = pump_from(cfg);
  const CrystalSpec crystal = crystal_from(cfg, pump);
  const auto points = tuning_curve(a.lambda_min_nm * 1e-9, a.lambda_max_nm * 1e-9,
                                   a.samples, pump, crystal);
  Output out = start_output("tuning-curve", cfg, c);
  out.add("pump_wavelength_nm", pump.wavelength_p * 1e9);
  out.add("crystal", crystal.name);
  out.add("crystal_length_mm", crystal.length_l * 1e3);
  out.add("cut_angle_deg", crystal.cut_angle_alpha * rad_to_deg);
  out.header = "lambda_s_nm,lambda_i_nm,theta_ext_s_deg,theta_ext_i_deg,residual_per_m";
  std::vector<std::pair<double, double>> curve;
  for (const auto& p : points) {
    out.rows.push_back(g12(p.lambda_s * 1e9) + "," + g12(p.lambda_i * 1e9) + "," +
                       g12(p.theta_s_ext * rad_to_deg) + "," +
                       g12(p.theta_i_ext * rad_to_deg) + "," + g12(p.residual));
    curve.emplace_back(p.lambda_s * 1e9, p.theta_s_ext * rad_to_deg);
  }
  emit(out, c, plot::line_plot(curve, "lambda_s (nm)", "theta_ext_s (deg)"));
  return 0;
}

struct MapArgs {
  double lambda_s_nm = 690.0;
  double range_mrad = 5.0;
  int samples = 201;
  std::string frame = "external";
};

int run_amplitude_map(const CommonOpts& c, const MapArgs& a) {
  const auto cfg = resolve_scenario(c);
  const PumpSpec pump = pump_from(cfg);
  const CrystalSpec crystal = crystal_from(cfg, pump);
  if (a.frame != "external" && a.frame != "internal") {
    throw std::invalid_argument("--frame must be 'external' or 'internal'");
  }
  const PhaseMatchPoint base =
      solve_emission_angles(a.lambda_s_nm * 1e-9, pump, crystal);
  GridSpec grid;
  const double r = a.range_mrad * 1e-3;
  grid.s_min = grid.i_min = -r;
  grid.s_max = grid.i_max = r;
  grid.n_s = grid.n_i = a.samples;
  grid.frame = (a.frame == "external") ? Frame::External : Frame::Internal;
  const AmplitudeMap map = correlation_map(base, pump, crystal, grid);
  Output out = start_output("amplitude-map", cfg, c);
  out.add("lambda_s_nm", base.lambda_s * 1e9);
  out.add("lambda_i_nm", base.lambda_i * 1e9);
  out.add("theta_s_int_rad", base.theta_s_int);
  out.add("theta_i_int_rad", base.theta_i_int);
  out.add("theta_s_ext_rad", base.theta_s_ext);
  out.add("theta_i_ext_rad", base.theta_i_ext);
  out.add("pump_diameter_um", pump.beam_diameter_a * 1e6);
  out.add("crystal_length_mm", crystal.length_l * 1e3);
  out.add("frame", a.frame);
  out.header = "d_theta_s_rad,d_theta_i_rad,f_x,f_z,f_sq";
  for (int is = 0; is < map.n_s(); ++is) {
    for (int ii = 0; ii < map.n_i(); ++ii) {
      out.rows.push_back(g12(map.grid_s[is]) + "," + g12(map.grid_i[ii]) + "," +
                         g12(map.at(map.f_x, is, ii)) + "," +
                         g12(map.at(map.f_z, is, ii)) + "," +
                         g12(map.at(map.f_sq, is, ii)));
    }
  }
  emit(out, c, plot::heatmap(map));
  return 0;
}

struct OverlapAlphaArgs {
  double lambda_s_nm = 701.0;
  double dalpha_max_deg = 0.06;
  int samples = 121;
};

int run_overlap_alpha(const CommonOpts& c, const OverlapAlphaArgs& a) {
  const auto cfg = resolve_scenario(c);
  const PumpSpec pump = pump_from(cfg);
  const CrystalSpec crystal = crystal_from(cfg, pump);
  const double r = a.dalpha_max_deg / rad_to_deg;
  const OverlapCurve curve =
      overlap_vs_misalignment(a.lambda_s_nm * 1e-9, -r, r, a.samples, pump, crystal);
  Output out = start_output("overlap-alpha", cfg, c);
  out.add("lambda_s_nm", curve.lambda_s * 1e9);
  out.add("lambda_i_nm", curve.lambda_i * 1e9);
  out.add("crystal_length_mm", crystal.length_l * 1e3);
  out.add("cut_angle_deg", crystal.cut_angle_alpha * rad_to_deg);
  out.header = "dalpha_deg,overlap";
  for (const auto& [x, y] : curve.samples) out.rows.push_back(g12(x) + "," + g12(y));
  emit(out, c, plot::line_plot(curve.samples, "dalpha (deg)", "overlap"));
  return 0;
}

struct OverlapZArgs {
  double lambda_s_nm = 690.0;
  double z_max_mm = 2.5;
  int samples = 101;
};

int run_overlap_z(const CommonOpts& c, const OverlapZArgs& a) {
  const auto cfg = resolve_scenario(c);
  const PumpSpec pump = pump_from(cfg);
  const CrystalSpec crystal = crystal_from(cfg, pump);
  const ImagingSystem imaging = imaging_from(cfg);
  const double r = a.z_max_mm * 1e-3;
  const OverlapCurve curve = overlap_vs_displacement(a.lambda_s_nm * 1e-9, -r, r,
                                                     a.samples, pump, crystal, imaging);
  Output out = start_output("overlap-z", cfg, c);
  out.add("lambda_s_nm", curve.lambda_s * 1e9);
  out.add("lambda_i_nm", curve.lambda_i * 1e9);
  out.add("focal_length_mm", imaging.focal_length_f * 1e3);
  out.add("crystal_length_mm", crystal.length_l * 1e3);
  out.header = "z_m,overlap";
  for (const auto& [x, y] : curve.samples) out.rows.push_back(g12(x) + "," + g12(y));
  emit(out, c, plot::line_plot(curve.samples, "z (m)", "overlap"));
  return 0;
}

struct SpectralArgs {
  double lambda_min_nm = 648.0, lambda_max_nm = 762.0;
  int samples = 115;
  int nodes = 129;
};

int run_spectral_overlap(const CommonOpts& c, const SpectralArgs& a) {
  const auto cfg = resolve_scenario(c);
  const PumpSpec pump = pump_from(cfg);
  const CrystalSpec crystal = crystal_from(cfg, pump);
  const ImagingSystem imaging = imaging_from(cfg);
  if (a.samples < 2) throw std::invalid_argument("need at least 2 wavelength samples");
  if (!(a.lambda_min_nm > 0.0 && a.lambda_min_nm < a.lambda_max_nm)) {
    throw std::invalid_argument("need 0 < lambda-min-nm < lambda-max-nm");
  }
  std::vector<double> lambdas(static_cast<size_t>(a.samples));
  for (int k = 0; k < a.samples; ++k) {
    lambdas[static_cast<size_t>(k)] =
        (a.lambda_min_nm + (a.lambda_max_nm - a.lambda_min_nm) * k / (a.samples - 1)) * 1e-9;
  }
  const OverlapCurve curve =
      spectral_overlap(lambdas, crystal, pump, imaging, a.nodes);
  Output out = start_output("spectral-overlap", cfg, c);
  out.add("focal_length_mm", imaging.focal_length_f * 1e3);
  out.add("crystal_length_mm", crystal.length_l * 1e3);
  out.add("quadrature_nodes", static_cast<double>(a.nodes));
  out.header = "lambda_s_nm,overlap";
  for (const auto& [x, y] : curve.samples) out.rows.push_back(g12(x) + "," + g12(y));
  emit(out, c, plot::line_plot(curve.samples, "lambda_s (nm)", "overlap"));
  return 0;
}

int run_rates(const CommonOpts& c) {
  const auto cfg = resolve_scenario(c);
  const DetectionProcess proc = detection_from(cfg);
  const auto [area, length] = detection_volume_from(cfg);
  const RadiationField coh = coherent_field_from(cfg);
  const RadiationField spdc = spdc_field_from(cfg);
  Output out = start_output("rates", cfg, c);
  out.add("eta2", proc.eta2);
  out.add("cross_section_m2", area);
  out.add("length_mm", length * 1e3);
  out.header = "field,mode_count,photons_per_mode,mean_total_photons,rate";
  for (const RadiationField* f : {&coh, &spdc}) {
    const double M = mode_count(volume_for_field(*f, area, length));
    const double n = photons_per_mode(*f);
    if (!weak_field(n)) {
      out.add("warning", "photons_per_mode " + g12(n) +
                             " exceeds the weak-field limit " + g12(weak_field_limit));
    }
    const double rate = (f->kind == FieldKind::Coherent)
                            ? rate_coherent(proc, M, n)
                            : rate_biphoton(proc, M, n);
    const char* kind = (f->kind == FieldKind::Coherent) ? "coherent" : "biphoton";
    out.rows.push_back(std::string(kind) + "," + g12(M) + "," + g12(n) + "," +
                       g12(M * n) + "," + g12(rate));
  }
  emit(out, c, "");
  return 0;
}

int run_enhancement(const CommonOpts& c) {
  const auto cfg = resolve_scenario(c);
  const auto [area, length] = detection_volume_from(cfg);
  const RadiationField coh = coherent_field_from(cfg);
  const RadiationField spdc = spdc_field_from(cfg);
  const double M_coh = mode_count(volume_for_field(coh, area, length));
  const double M_spdc = mode_count(volume_for_field(spdc, area, length));
  const double n_coh = photons_per_mode(coh);
  const double n_spdc = photons_per_mode(spdc);
  const EnhancementResult xi = enhancement_xi(coh, spdc, M_coh, M_spdc, n_coh, n_spdc);
  Output out = start_output("enhancement", cfg, c);
  out.add("intensity_w_m2", coh.intensity_I);
  out.add("wavelength_nm", coh.lambda * 1e9);
  out.add("coh_solid_angle_sr", coh.solid_angle);
  out.add("coh_bandwidth_rad_s", coh.bandwidth);
  out.header = "xi_ratio,xi_closed,M_coh,n_coh,M_spdc,n_spdc";
  out.rows.push_back(g12(xi.xi_ratio) + "," + g12(xi.xi_closed) + "," + g12(M_coh) +
                     "," + g12(n_coh) + "," + g12(M_spdc) + "," + g12(n_spdc));
  emit(out, c, "");
  return 0;
}

struct UpconversionArgs {
  double laser_power_w = 1.0;
  double sh_power_w = 0.6;
  double target_power_nw = 50.0;
  double duty_cycle = 1e-5;
  double photon_wavelength_nm = 351.1;
  double xi = 0.0;  // 0 = derive from the scenario fields
};

int run_upconversion(const CommonOpts& c, const UpconversionArgs& a) {
  const auto cfg = resolve_scenario(c);
  double xi = a.xi;
  if (xi <= 0.0) {
    const auto [area, length] = detection_volume_from(cfg);
    const RadiationField coh = coherent_field_from(cfg);
    const RadiationField spdc = spdc_field_from(cfg);
    xi = enhancement_xi(coh, spdc, mode_count(volume_for_field(coh, area, length)),
                        mode_count(volume_for_field(spdc, area, length)),
                        photons_per_mode(coh), photons_per_mode(spdc))
             .xi_closed;
  }
  const UpconversionEstimate est =
      upconversion_estimate(a.laser_power_w, a.sh_power_w, a.target_power_nw * 1e-9,
                            a.duty_cycle, a.photon_wavelength_nm * 1e-9, xi);
  Output out = start_output("upconversion-estimate", cfg, c);
  out.add("laser_power_w", a.laser_power_w);
  out.add("sh_power_w", a.sh_power_w);
  out.add("target_power_nw", a.target_power_nw);
  out.add("duty_cycle", a.duty_cycle);
  out.add("photon_wavelength_nm", a.photon_wavelength_nm);
  out.add("quoted_photons_per_s", 0.2);
  out.add("quoted_photons_per_s_enhanced", 0.2 * xi);
  out.add("note",
          "computed photons_per_s follows from upconverted_power_w divided by "
          "the photon energy and does not reproduce the quoted 0.2 per second");
  out.header = "upconverted_power_w,photons_per_s,photons_per_s_enhanced,xi";
  out.rows.push_back(g12(est.upconverted_power_w) + "," + g12(est.photons_per_s) +
                     "," + g12(est.photons_per_s_enhanced) + "," + g12(xi));
  emit(out, c, "");
  return 0;
}

struct SimulateArgs {
  double intensity = -1.0;  // W/m^2, negative = scenario default
  double on_duration_s = -1.0;
  double horizon_s = -1.0;
  double step_s = -1.0;
};

int run_simulate(const CommonOpts& c, const SimulateArgs& a) {
  const auto cfg = resolve_scenario(c);
  const TrapModel model = traps_from(cfg);
  ScheduleSpec spec = schedule_from(cfg);
  if (a.intensity >= 0.0) spec.on_intensity = a.intensity;
  if (a.on_duration_s > 0.0) spec.on_duration_s = a.on_duration_s;
  if (a.horizon_s > 0.0) spec.horizon_s = a.horizon_s;
  if (a.step_s > 0.0) spec.step_s = a.step_s;
  IntensitySchedule schedule;
  if (spec.on_duration_s < spec.horizon_s) {
    schedule = {{spec.on_duration_s, spec.on_intensity}, {spec.horizon_s, 0.0}};
  } else {
    schedule = {{spec.horizon_s, spec.on_intensity}};
  }
  const Trace trace = simulate_sensitization(model, schedule, spec.horizon_s, spec.step_s);
  Output out = start_output("simulate-sensitization", cfg, c);
  out.add("tau1_s", model.trap1.lifetime);
  out.add("tau2_s", model.trap2.lifetime);
  out.add("fill1_m2_per_w_s", model.trap1.fill_coeff);
  out.add("fill2_m2_per_w_s", model.trap2.fill_coeff);
  out.add("gain1", model.gain1);
  out.add("gain2", model.gain2);
  out.add("s0", model.base_sensitivity);
  out.add("on_intensity_w_m2", spec.on_intensity);
  out.add("on_duration_s", spec.on_duration_s);
  out.header = "time_s,sensitivity";
  std::vector<std::pair<double, double>> curve;
  for (size_t k = 0; k < trace.times.size(); ++k) {
    out.rows.push_back(g12(trace.times[k]) + "," + g12(trace.values[k]));
    curve.emplace_back(trace.times[k], trace.values[k]);
  }
  emit(out, c, plot::line_plot(curve, "time (s)", "sensitivity"));
  return 0;
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file " + path);
  Trace trace;
  std::string line;
  bool header_skipped = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_skipped) {
      header_skipped = true;  // one-line column header
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(lineno) + " of " +
                                    path + ": '" + cell + "' is not a number");
      }
    }
    if (vals.size() != 2 && vals.size() != 3) {
      throw std::invalid_argument("line " + std::to_string(lineno) + " of " + path +
                                  ": expected time,value[,sigma]");
    }
    trace.times.push_back(vals[0]);
    trace.values.push_back(vals[1]);
    if (vals.size() == 3) trace.sigmas.push_back(vals[2]);
  }
  if (!trace.sigmas.empty() && trace.sigmas.size() != trace.values.size()) {
    throw std::invalid_argument(path + ": sigma column present on only some rows");
  }
  return trace;
}

int run_fit_decay(const CommonOpts& c, const std::string& input) {
  const auto cfg = resolve_scenario(c);
  const Trace trace = read_trace_csv(input);
  const DecayFit fit = fit_biexponential(trace);
  Output out = start_output("fit-decay", cfg, c);
  out.add("input", basename_of(input));
  out.add("fit_a1", fit.a1);
  out.add("fit_tau1_s", fit.tau1);
  out.add("fit_a2", fit.a2);
  out.add("fit_tau2_s", fit.tau2);
  out.add("fit_offset", fit.offset);
  out.add("fit_rms_residual", fit.rms_residual);
  out.add("fit_iterations", static_cast<double>(fit.iterations));
  out.add("fit_converged", fit.converged ? "true" : "false");
  out.add("fit_rank_deficient", fit.rank_deficient ? "true" : "false");
  out.header = "time_s,value,model,residual";
  std::vector<std::pair<double, double>> curve;
  for (size_t k = 0; k < trace.times.size(); ++k) {
    const double t = trace.times[k];
    const double m = fit.a1 * std::exp(-t / fit.tau1) +
                     fit.a2 * std::exp(-t / fit.tau2) + fit.offset;
    out.rows.push_back(g12(t) + "," + g12(trace.values[k]) + "," + g12(m) + "," +
                       g12(trace.values[k] - m));
    curve.emplace_back(t, trace.values[k]);
  }
  emit(out, c, plot::line_plot(curve, "time (s)", "value"));
  return fit.converged ? 0 : 2;
}

struct ResponseArgs {
  double z_max_mm = 5.0;
  int samples = 101;
};

int run_response_scan(const CommonOpts& c, const ResponseArgs& a) {
  const auto cfg = resolve_scenario(c);
  const ResponseScanSpec spec = response_from(cfg);
  if (a.samples < 2) throw std::invalid_argument("need at least 2 samples");
  GaussianSpot spot;
  spot.waist_area_A0 =
      constants::pi * spec.spot_diameter * spec.spot_diameter / 4.0;
  spot.rayleigh_length_zr = spec.rayleigh_length;
  Output out = start_output("response-scan", cfg, c);
  out.add("spot_diameter_um", spec.spot_diameter * 1e6);
  out.add("rayleigh_mm", spec.rayleigh_length * 1e3);
  out.add("power_nw", spec.power * 1e9);
  out.add("gain", spec.gain);
  out.header = "z_m,rate";
  std::vector<std::pair<double, double>> curve;
  const double r = a.z_max_mm * 1e-3;
  for (int k = 0; k < a.samples; ++k) {
    const double z = -r + 2.0 * r * k / (a.samples - 1);
    const double rate = response_vs_position(z, spot, spec.power, spec.gain);
    out.rows.push_back(g12(z) + "," + g12(rate));
    curve.emplace_back(z, rate);
  }
  emit(out, c, plot::line_plot(curve, "z (m)", "rate"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPDC biphoton field and two-photon detection toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  TuningArgs tuning;
  MapArgs map_args;
  OverlapAlphaArgs oa_args;
  OverlapZArgs oz_args;
  SpectralArgs sp_args;
  UpconversionArgs up_args;
  SimulateArgs sim_args;
  ResponseArgs resp_args;
  std::string fit_input;

  auto* tc = app.add_subcommand("tuning-curve", "phase-matched emission angles vs wavelength");
  add_common(tc, common);
  tc->add_option("--lambda-min-nm", tuning.lambda_min_nm, "signal sweep start");
  tc->add_option("--lambda-max-nm", tuning.lambda_max_nm, "signal sweep end");
  tc->add_option("--samples", tuning.samples, "sample count");

  auto* am = app.add_subcommand("amplitude-map", "transverse two-photon amplitude over a deviation grid");
  add_common(am, common);
  am->add_option("--lambda-s-nm", map_args.lambda_s_nm, "signal wavelength");
  am->add_option("--range-mrad", map_args.range_mrad, "half range of both axes");
  am->add_option("--samples", map_args.samples, "points per axis");
  am->add_option("--frame", map_args.frame, "'external' or 'internal'");

  auto* oa = app.add_subcommand("overlap-alpha", "overlap vs optic-axis misalignment");
  add_common(oa, common);
  oa->add_option("--lambda-s-nm", oa_args.lambda_s_nm, "signal wavelength");
  oa->add_option("--dalpha-max-deg", oa_args.dalpha_max_deg, "half range");
  oa->add_option("--samples", oa_args.samples, "sample count");

  auto* oz = app.add_subcommand("overlap-z", "overlap vs displacement from the imaging plane");
  add_common(oz, common);
  oz->add_option("--lambda-s-nm", oz_args.lambda_s_nm, "signal wavelength");
  oz->add_option("--z-max-mm", oz_args.z_max_mm, "half range");
  oz->add_option("--samples", oz_args.samples, "sample count");

  auto* so = app.add_subcommand("spectral-overlap", "z-integrated overlap vs wavelength");
  add_common(so, common);
  so->add_option("--lambda-min-nm", sp_args.lambda_min_nm, "grid start");
  so->add_option("--lambda-max-nm", sp_args.lambda_max_nm, "grid end");
  so->add_option("--samples", sp_args.samples, "wavelength count");
  so->add_option("--nodes", sp_args.nodes, "Simpson node count (odd)");

  auto* ra = app.add_subcommand("rates", "mode counts, photons per mode and detection rates");
  add_common(ra, common);

  auto* en = app.add_subcommand("enhancement", "biphoton vs coherent enhancement factor");
  add_common(en, common);

  auto* up = app.add_subcommand("upconversion-estimate", "up-converted power and photon rate chain");
  add_common(up, common);
  up->add_option("--laser-power-w", up_args.laser_power_w, "laser power");
  up->add_option("--sh-power-w", up_args.sh_power_w, "second-harmonic power at full laser power");
  up->add_option("--target-power-nw", up_args.target_power_nw, "target pump power");
  up->add_option("--duty-cycle", up_args.duty_cycle, "laser duty cycle");
  up->add_option("--photon-wavelength-nm", up_args.photon_wavelength_nm, "photon wavelength");
  up->add_option("--xi", up_args.xi, "enhancement factor override");

  auto* si = app.add_subcommand("simulate-sensitization", "two-trap sensitization dynamics");
  add_common(si, common);
  si->add_option("--intensity-w-m2", sim_args.intensity, "illumination intensity");
  si->add_option("--on-duration-s", sim_args.on_duration_s, "light-on duration");
  si->add_option("--horizon-s", sim_args.horizon_s, "simulation horizon");
  si->add_option("--step-s", sim_args.step_s, "integration/sampling step");

  auto* fd = app.add_subcommand("fit-decay", "bi-exponential fit of a relaxation trace");
  add_common(fd, common);
  fd->add_option("--input", fit_input, "comma-separated time_s,value[,sigma] file")
      ->required();

  auto* rs = app.add_subcommand("response-scan", "two-photon response vs detector position");
  add_common(rs, common);
  rs->add_option("--z-max-mm", resp_args.z_max_mm, "half range");
  rs->add_option("--samples", resp_args.samples, "sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints usage/help
    return code == 0 ? 0 : 1;
  }

  try {
    if (tc->parsed()) return run_tuning_curve(common, tuning);
    if (am->parsed()) return run_amplitude_map(common, map_args);
    if (oa->parsed()) return run_overlap_alpha(common, oa_args);
    if (oz->parsed()) return run_overlap_z(common, oz_args);
    if (so->parsed()) return run_spectral_overlap(common, sp_args);
    if (ra->parsed()) return run_rates(common);
    if (en->parsed()) return run_enhancement(common);
    if (up->parsed()) return run_upconversion(common, up_args);
    if (si->parsed()) return run_simulate(common, sim_args);
    if (fd->parsed()) return run_fit_decay(common, fit_input);
    if (rs->parsed()) return run_response_scan(common, resp_args);
  } catch (const NoSolutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const RankDeficiencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
