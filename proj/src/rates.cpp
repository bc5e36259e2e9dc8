#include "biphoton/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "biphoton/constants.hpp"

namespace biphoton {

namespace {
constexpr double two_pi = 2.0 * constants::pi;
constexpr double cube(double x) { return x * x * x; }
}  // namespace

double mode_count(const DetectionVolume& vol) {
  return vol.cross_section_A * vol.length_L / cube(two_pi) *
         vol.wavenumber_k * vol.wavenumber_k / constants::c_m_s *
         vol.solid_angle * vol.bandwidth;
}

double photons_per_mode(const RadiationField& field) {
  return field.intensity_I * cube(field.lambda) /
         (constants::hbar_J_s * constants::c_m_s) /
         (field.solid_angle * field.bandwidth);
}

double rate_coherent(const DetectionProcess& proc, double mode_count_M, double n) {
  return proc.eta2 * mode_count_M * n * n;
}

double rate_biphoton(const DetectionProcess& proc, double mode_count_M, double n) {
  return proc.eta2 * mode_count_M * n;
}

double xi_ratio(double mode_count_coh, double mode_count_spdc, double n_coh,
                double n_spdc) {
  return mode_count_spdc * n_spdc / (mode_count_coh * n_coh * n_coh);
}

EnhancementResult enhancement_xi(const RadiationField& coh,
                                 const RadiationField& spdc,
                                 double mode_count_coh, double mode_count_spdc,
                                 double n_coh, double n_spdc) {
  const double scale = std::max(std::abs(coh.intensity_I), std::abs(spdc.intensity_I));
  if (std::abs(coh.intensity_I - spdc.intensity_I) > 1e-9 * scale) {
    throw std::invalid_argument(
        "closed-form enhancement requires equal intensities (1e-9 relative)");
  }
  EnhancementResult r;
  r.xi_ratio = xi_ratio(mode_count_coh, mode_count_spdc, n_coh, n_spdc);
  r.xi_closed = constants::hbar_J_s * constants::c_m_s * coh.solid_angle *
                coh.bandwidth / (coh.intensity_I * cube(coh.lambda));
  return r;
}

double solid_angle_from_divergence(double theta_d) {
  return two_pi * theta_d * theta_d;
}

DetectionVolume volume_for_field(const RadiationField& field,
                                 double cross_section_A, double length_L) {
  DetectionVolume vol;
  vol.cross_section_A = cross_section_A;
  vol.length_L = length_L;
  vol.solid_angle = field.solid_angle;
  vol.bandwidth = field.bandwidth;
  vol.wavenumber_k = two_pi / field.lambda;
  return vol;
}

UpconversionEstimate upconversion_estimate(double laser_power_w,
                                           double sh_power_w,
                                           double target_power_w,
                                           double duty_cycle,
                                           double photon_wavelength_m,
                                           double xi) {
  if (!(laser_power_w > 0.0) || !(photon_wavelength_m > 0.0)) {
    throw std::invalid_argument("laser power and photon wavelength must be positive");
  }
  UpconversionEstimate e;
  const double scale = target_power_w / laser_power_w;
  e.upconverted_power_w = sh_power_w * scale * scale * duty_cycle;
  const double photon_energy =
      constants::h_J_s * constants::c_m_s / photon_wavelength_m;
  e.photons_per_s = e.upconverted_power_w / photon_energy;
  e.photons_per_s_enhanced = e.photons_per_s * xi;
  return e;
}

}  // namespace biphoton
