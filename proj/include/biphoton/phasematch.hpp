#pragma once

#include <vector>

#include "biphoton/dispersion.hpp"

namespace biphoton {

struct PumpSpec {
  double wavelength_p = 351.1e-9;   // m
  double beam_diameter_a = 100e-6;  // m, Gaussian pump diameter
  double power = 1.0;               // W
};

// One solved point of the Type-I (e -> o + o) phase-matching conditions
//   1/lambda_s + 1/lambda_i = 1/lambda_p
//   k_s + k_i = k_p.
// Angles are signed: signal on the positive side of the pump axis, idler on
// the negative side.
struct PhaseMatchPoint {
  double lambda_s = 0.0;
  double lambda_i = 0.0;
  double theta_s_int = 0.0;  // rad, internal
  double theta_i_int = 0.0;  // rad, internal, <= 0
  double theta_s_ext = 0.0;  // rad, after refraction at the exit face
  double theta_i_ext = 0.0;  // rad, <= 0
  double residual = 0.0;     // |k_s + k_i - k_p| in 1/m
};

// lambda_i = (1/lambda_p - 1/lambda_s)^-1. Throws std::domain_error for
// lambda_s <= lambda_p.
double conjugate_wavelength(double lambda_s, const PumpSpec& pump);

// Cut angle alpha solving n_e(lambda_p, alpha) = n_o(2 lambda_p), i.e. the
// collinear degenerate condition. Bracketed bisection on [0, pi/2] refined
// by Newton steps; index-equation residual < 1e-12. Throws NoSolutionError
// when the bracket has no sign change.
double degenerate_cut_angle(const PumpSpec& pump, const CrystalSpec& crystal);

// Solves the transverse and longitudinal balance for the internal emission
// angles at the given signal wavelength, bisecting on theta_s in [0, 0.2].
// Throws NoSolutionError when the wavelength is outside the tuning range of
// this cut, std::out_of_range when either wavelength leaves the dispersion
// range.
PhaseMatchPoint solve_emission_angles(double lambda_s, const PumpSpec& pump,
                                      const CrystalSpec& crystal);

// Snell refraction at the exit face (face normal along the pump axis);
// ordinary index, signal and idler are o-waves in Type-I.
// Throws std::domain_error past the total-internal-reflection bound.
double internal_to_external(double theta_int, double lambda_m,
                            const CrystalSpec& crystal);
double external_to_internal(double theta_ext, double lambda_m,
                            const CrystalSpec& crystal);

enum class Photon { Signal, Idler };

// d(theta_ext)/d(alpha) of the signed external emission angle by central
// finite difference. The step starts at `step` and is halved until both
// alpha +/- delta lie on the tuning branch (the branch edge sits arbitrarily
// close to alpha at near-degenerate wavelengths), then settled at a quarter
// of the first workable value. Throws DerivativeUndefinedError at the
// branch point itself.
double angle_derivative_wrt_cut(double lambda_s, const PumpSpec& pump,
                                const CrystalSpec& crystal, Photon which,
                                double step = 1e-4);

// Independent recomputation of |k_s + k_i - k_p| for a solved point.
double wavevector_mismatch(const PhaseMatchPoint& point, const PumpSpec& pump,
                           const CrystalSpec& crystal);

// Pump wave vector magnitude 2*pi*n_e(lambda_p, alpha)/lambda_p.
double pump_wavenumber(const PumpSpec& pump, const CrystalSpec& crystal);

std::vector<PhaseMatchPoint> tuning_curve(double lambda_min, double lambda_max,
                                          int samples, const PumpSpec& pump,
                                          const CrystalSpec& crystal);

}  // namespace biphoton
