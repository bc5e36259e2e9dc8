#include "biphoton/overlap.hpp"

#include <cmath>
#include <stdexcept>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

constexpr double rad_to_deg = 180.0 / constants::pi;

AngularDeviation default_displacement_model(double z, const PhaseMatchPoint& base,
                                            const ImagingSystem& imaging) {
  if (std::abs(z) >= imaging.focal_length_f) {
    throw ModelValidityError(
        "displacement exceeds the focal length; the first-order angular-"
        "magnification model does not apply");
  }
  const double factor = -z / imaging.focal_length_f;
  return {factor * std::abs(base.theta_s_ext), factor * std::abs(base.theta_i_ext),
          Frame::External};
}

int validate_samples(int samples) {
  if (samples < 2) throw std::invalid_argument("curve needs at least 2 samples");
  return samples;
}

}  // namespace

double misalignment_overlap(double dalpha, const PhaseMatchPoint& base,
                            std::pair<double, double> derivs,
                            const PumpSpec& pump, const CrystalSpec& crystal) {
  // The signed lab derivatives have opposite signs; expressed in each
  // photon's outward sense both angle magnitudes grow together.
  const double dts = derivs.first * dalpha;
  const double dti = -derivs.second * dalpha;
  const AngularDeviation dev{dts, dti, Frame::External};
  return correlation(dev, base, pump, crystal);
}

OverlapCurve overlap_vs_misalignment(double lambda_s, double dalpha_min,
                                     double dalpha_max, int samples,
                                     const PumpSpec& pump,
                                     const CrystalSpec& crystal) {
  validate_samples(samples);
  if (!(dalpha_min < dalpha_max)) {
    throw std::invalid_argument("misalignment range must satisfy min < max");
  }
  const PhaseMatchPoint base = solve_emission_angles(lambda_s, pump, crystal);
  const std::pair<double, double> derivs{
      angle_derivative_wrt_cut(lambda_s, pump, crystal, Photon::Signal),
      angle_derivative_wrt_cut(lambda_s, pump, crystal, Photon::Idler)};
  OverlapCurve curve;
  curve.axis = OverlapAxis::MisalignmentDeg;
  curve.lambda_s = base.lambda_s;
  curve.lambda_i = base.lambda_i;
  curve.samples.reserve(static_cast<size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double da = dalpha_min + (dalpha_max - dalpha_min) * k / (samples - 1);
    curve.samples.emplace_back(da * rad_to_deg,
                               misalignment_overlap(da, base, derivs, pump, crystal));
  }
  return curve;
}

AngularDeviation displacement_angular_errors(double z, const PhaseMatchPoint& base,
                                             const ImagingSystem& imaging) {
  return default_displacement_model(z, base, imaging);
}

OverlapCurve overlap_vs_displacement(double lambda_s, double z_min, double z_max,
                                     int samples, const PumpSpec& pump,
                                     const CrystalSpec& crystal,
                                     const ImagingSystem& imaging,
                                     const DisplacementModel& model) {
  validate_samples(samples);
  if (!(z_min < z_max)) {
    throw std::invalid_argument("displacement range must satisfy min < max");
  }
  const DisplacementModel& m = model ? model : default_displacement_model;
  const PhaseMatchPoint base = solve_emission_angles(lambda_s, pump, crystal);
  OverlapCurve curve;
  curve.axis = OverlapAxis::DisplacementM;
  curve.lambda_s = base.lambda_s;
  curve.lambda_i = base.lambda_i;
  curve.samples.reserve(static_cast<size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double z = z_min + (z_max - z_min) * k / (samples - 1);
    curve.samples.emplace_back(z, correlation(m(z, base, imaging), base, pump, crystal));
  }
  return curve;
}

double spectral_overlap_at(double lambda_s, const CrystalSpec& crystal,
                           const PumpSpec& pump, const ImagingSystem& imaging,
                           int quadrature_nodes, const DisplacementModel& model) {
  if (quadrature_nodes < 3) {
    throw std::invalid_argument("Simpson quadrature needs at least 3 nodes");
  }
  if (quadrature_nodes % 2 == 0) {
    throw std::invalid_argument("composite Simpson quadrature needs an odd node count");
  }
  const DisplacementModel& m = model ? model : default_displacement_model;
  const PhaseMatchPoint base = solve_emission_angles(lambda_s, pump, crystal);
  const double l = crystal.length_l;
  const double h = l / (quadrature_nodes - 1);
  double sum = 0.0;
  for (int k = 0; k < quadrature_nodes; ++k) {
    const double z = -0.5 * l + h * k;
    const double v = correlation(m(z, base, imaging), base, pump, crystal);
    const double w = (k == 0 || k == quadrature_nodes - 1) ? 1.0
                     : (k % 2 == 1)                        ? 4.0
                                                           : 2.0;
    sum += w * v;
  }
  return sum * h / 3.0 / l;
}

OverlapCurve spectral_overlap(std::span<const double> lambdas,
                              const CrystalSpec& crystal, const PumpSpec& pump,
                              const ImagingSystem& imaging, int quadrature_nodes,
                              const DisplacementModel& model) {
  if (lambdas.empty()) throw std::invalid_argument("spectral overlap needs a wavelength grid");
  OverlapCurve curve;
  curve.axis = OverlapAxis::WavelengthNm;
  curve.lambda_s = lambdas.front();
  curve.lambda_i = conjugate_wavelength(lambdas.front(), pump);
  curve.samples.reserve(lambdas.size());
  for (double lam : lambdas) {
    curve.samples.emplace_back(
        lam * 1e9,
        spectral_overlap_at(lam, crystal, pump, imaging, quadrature_nodes, model));
  }
  return curve;
}

}  // namespace biphoton
