#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "biphoton/amplitude.hpp"

namespace biphoton {

// 1:1 imaging relay between the down- and up-converting crystals.
struct ImagingSystem {
  double focal_length_f = 50e-3;  // m
  double object_distance = 100e-3;
  double image_distance = 100e-3;
  double magnification = -1.0;

  static ImagingSystem one_to_one(double focal_length) {
    return {focal_length, 2.0 * focal_length, 2.0 * focal_length, -1.0};
  }
};

enum class OverlapAxis { MisalignmentDeg, DisplacementM, WavelengthNm };

struct OverlapCurve {
  OverlapAxis axis = OverlapAxis::MisalignmentDeg;
  std::vector<std::pair<double, double>> samples;  // (abscissa, overlap)
  double lambda_s = 0.0;
  double lambda_i = 0.0;
};

// Overlap at a single misalignment: Delta_theta_j = (d theta_j^ext/d alpha)
// * Delta_alpha with the signed derivatives from phasematch, evaluated as
// F^2 in the external frame. `derivs` carries (signal, idler) signed
// derivatives so curve sweeps solve them once.
double misalignment_overlap(double dalpha, const PhaseMatchPoint& base,
                            std::pair<double, double> derivs,
                            const PumpSpec& pump, const CrystalSpec& crystal);

// Curve of the above over [dalpha_min, dalpha_max] (rad), abscissa in deg.
// Propagates DerivativeUndefinedError from the branch point.
OverlapCurve overlap_vs_misalignment(double lambda_s, double dalpha_min,
                                     double dalpha_max, int samples,
                                     const PumpSpec& pump,
                                     const CrystalSpec& crystal);

// First-order thin-lens model: a source plane displaced by z from the 1:1
// imaging plane scales the angular magnification by (1 - z/f), so each ray
// arrives with Delta_theta_j = -(z/f) * theta_j^ext. Returns external-frame
// deviations. Throws ModelValidityError for |z| >= f.
AngularDeviation displacement_angular_errors(double z,
                                             const PhaseMatchPoint& base,
                                             const ImagingSystem& imaging);

using DisplacementModel = std::function<AngularDeviation(
    double z, const PhaseMatchPoint&, const ImagingSystem&)>;

// F^2 vs longitudinal displacement z at a fixed signal wavelength.
OverlapCurve overlap_vs_displacement(double lambda_s, double z_min,
                                     double z_max, int samples,
                                     const PumpSpec& pump,
                                     const CrystalSpec& crystal,
                                     const ImagingSystem& imaging,
                                     const DisplacementModel& model = {});

// S(lambda) = (1/l) Int_{-l/2}^{+l/2} F^2(0, dts(z), dti(z)) dz by composite
// Simpson quadrature (odd node count >= 3, default 129).
OverlapCurve spectral_overlap(std::span<const double> lambdas,
                              const CrystalSpec& crystal, const PumpSpec& pump,
                              const ImagingSystem& imaging,
                              int quadrature_nodes = 129,
                              const DisplacementModel& model = {});

// Single-wavelength S value (same quadrature).
double spectral_overlap_at(double lambda_s, const CrystalSpec& crystal,
                           const PumpSpec& pump, const ImagingSystem& imaging,
                           int quadrature_nodes = 129,
                           const DisplacementModel& model = {});

}  // namespace biphoton
