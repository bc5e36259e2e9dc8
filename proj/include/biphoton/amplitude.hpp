#pragma once

#include <vector>

#include "biphoton/phasematch.hpp"

namespace biphoton {

enum class Frame { Internal, External };

// Angular deviations (Delta_theta_s, Delta_theta_i) from a phase-matched base
// point. Each deviation is measured positive away from the pump axis on that
// photon's own side; with the opposite-side emission convention this makes
// F_x a function of the difference combination and F_z of the sum.
// The factorization is derived for |d_theta| < 0.1 rad.
struct AngularDeviation {
  double d_theta_s = 0.0;  // rad
  double d_theta_i = 0.0;  // rad
  Frame frame = Frame::Internal;
};

// F_x = exp{ -(2 pi a)^2/4 [ (n_s/lambda_s) cos(theta_s) dts
//                          - (n_i/lambda_i) cos(theta_i) dti ]^2 }.
// External-frame deviations are first mapped through the Snell derivative
// d(theta_int) = cos(theta_ext)/(n cos(theta_int)) d(theta_ext).
double f_x(const AngularDeviation& dev, const PhaseMatchPoint& base,
           const PumpSpec& pump, const CrystalSpec& crystal);

// F_z = sinc{ pi l [ (n_s/lambda_s) sin(theta_s) dts
//                  + (n_i/lambda_i) sin(theta_i) dti ] },
// sinc(x) = sin(x)/x unnormalized, sinc(0) = 1, series 1 - x^2/6 for
// |x| < 1e-8. The overall sign of the argument is ignored (sinc is even).
double f_z(const AngularDeviation& dev, const PhaseMatchPoint& base,
           const CrystalSpec& crystal);

// unnormalized sinc with the small-x series
double sinc(double x);

struct GridSpec {
  double s_min = -5e-3, s_max = 5e-3;  // rad
  double i_min = -5e-3, i_max = 5e-3;  // rad
  int n_s = 201, n_i = 201;
  Frame frame = Frame::External;
};

struct AmplitudeMap {
  PhaseMatchPoint base_point;
  std::vector<double> grid_s;  // rad
  std::vector<double> grid_i;  // rad
  // row-major over (grid_s, grid_i)
  std::vector<double> f_x, f_z, f_sq;
  Frame frame = Frame::External;
  double pump_diameter_a = 0.0;
  double crystal_length_l = 0.0;

  int n_s() const { return static_cast<int>(grid_s.size()); }
  int n_i() const { return static_cast<int>(grid_i.size()); }
  double at(const std::vector<double>& m, int is, int ii) const {
    return m[static_cast<size_t>(is) * grid_i.size() + static_cast<size_t>(ii)];
  }
};

// Fills f_x, f_z and f_sq = (f_x*f_z)^2 over the grid, row-major.
// Throws std::invalid_argument for fewer than 2 points per axis.
AmplitudeMap correlation_map(const PhaseMatchPoint& base, const PumpSpec& pump,
                             const CrystalSpec& crystal, const GridSpec& grid);

// F^2(0, dts, dti) = (f_x * f_z)^2 at a single deviation.
double correlation(const AngularDeviation& dev, const PhaseMatchPoint& base,
                   const PumpSpec& pump, const CrystalSpec& crystal);

}  // namespace biphoton
