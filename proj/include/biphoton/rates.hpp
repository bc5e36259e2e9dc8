#pragma once

namespace biphoton {

enum class FieldKind { Coherent, Biphoton };

struct RadiationField {
  double intensity_I = 0.0;   // W/m^2
  double lambda = 702e-9;     // m
  double solid_angle = 0.0;   // sr
  double bandwidth = 0.0;     // rad/s
  FieldKind kind = FieldKind::Coherent;
};

struct DetectionVolume {
  double cross_section_A = 0.0;  // m^2
  double length_L = 0.0;         // m
  double solid_angle = 0.0;      // sr
  double bandwidth = 0.0;        // rad/s
  double wavenumber_k = 0.0;     // 1/m
};

struct DetectionProcess {
  // Two-photon quantum efficiency; absorbs up-conversion and photodetection
  // efficiencies.
  double eta2 = 1.0;
};

// M = (A L / (2 pi)^3) (k^2/c) dOmega domega
double mode_count(const DetectionVolume& vol);

// <n> = I lambda^3 / (hbar c) / (dOmega domega)
double photons_per_mode(const RadiationField& field);

// Eq. (4)/(5) hold in the weak-field limit <n> << 1; callers should warn
// above this threshold rather than fail.
inline constexpr double weak_field_limit = 0.1;
inline bool weak_field(double n) { return n <= weak_field_limit; }

// R_coh = eta2 M <n>^2
double rate_coherent(const DetectionProcess& proc, double mode_count_M,
                     double n);

// R_spdc = eta2 M <n>  (the phase-matched idler is guaranteed present)
double rate_biphoton(const DetectionProcess& proc, double mode_count_M,
                     double n);

// xi = R_spdc / R_coh = M_spdc <n>_spdc / (M_coh <n>_coh^2)
double xi_ratio(double mode_count_coh, double mode_count_spdc, double n_coh,
                double n_spdc);

struct EnhancementResult {
  double xi_ratio = 0.0;
  double xi_closed = 0.0;  // hbar c dOmega_coh domega_coh / (I lambda^3)
};

// Both forms of the enhancement factor. The closed form assumes equal
// intensities; throws std::invalid_argument if they differ by more than
// 1e-9 relative.
EnhancementResult enhancement_xi(const RadiationField& coh,
                                 const RadiationField& spdc,
                                 double mode_count_coh, double mode_count_spdc,
                                 double n_coh, double n_spdc);

// dOmega = 2 pi theta_d^2 for a beam of divergence theta_d.
double solid_angle_from_divergence(double theta_d);

// Detection volume paired with a field so that M <n> = I A L / (c hbar w):
// k is the vacuum wavenumber of the field and the acceptance equals the
// field's angular and spectral spread.
DetectionVolume volume_for_field(const RadiationField& field,
                                 double cross_section_A, double length_L);

struct UpconversionEstimate {
  double upconverted_power_w = 0.0;
  double photons_per_s = 0.0;
  double photons_per_s_enhanced = 0.0;
};

// P_up = sh_power (target/laser)^2 duty_cycle, converted to photons/s at the
// given wavelength; the enhanced figure multiplies by xi.
UpconversionEstimate upconversion_estimate(double laser_power_w,
                                           double sh_power_w,
                                           double target_power_w,
                                           double duty_cycle,
                                           double photon_wavelength_m,
                                           double xi);

}  // namespace biphoton
