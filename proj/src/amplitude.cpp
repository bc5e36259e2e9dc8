#include "biphoton/amplitude.hpp"

#include <cmath>
#include <stdexcept>

#include "biphoton/constants.hpp"

namespace biphoton {

namespace {

// Per-photon geometry of a base point, reduced to angle magnitudes.
struct BaseAngles {
  double n_s, n_i;
  double ts_int, ti_int;  // magnitudes
  double ts_ext, ti_ext;
  double snell_s, snell_i;  // d(theta_int)/d(theta_ext)
};

BaseAngles base_angles(const PhaseMatchPoint& base, const CrystalSpec& crystal) {
  BaseAngles b;
  b.n_s = index_ordinary(base.lambda_s, crystal.ordinary);
  b.n_i = index_ordinary(base.lambda_i, crystal.ordinary);
  b.ts_int = std::abs(base.theta_s_int);
  b.ti_int = std::abs(base.theta_i_int);
  b.ts_ext = std::abs(base.theta_s_ext);
  b.ti_ext = std::abs(base.theta_i_ext);
  b.snell_s = std::cos(b.ts_ext) / (b.n_s * std::cos(b.ts_int));
  b.snell_i = std::cos(b.ti_ext) / (b.n_i * std::cos(b.ti_int));
  return b;
}

// Deviations mapped to the internal frame.
std::pair<double, double> internal_deviation(const AngularDeviation& dev,
                                             const BaseAngles& b) {
  if (dev.frame == Frame::Internal) return {dev.d_theta_s, dev.d_theta_i};
  return {dev.d_theta_s * b.snell_s, dev.d_theta_i * b.snell_i};
}

}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double f_x(const AngularDeviation& dev, const PhaseMatchPoint& base,
           const PumpSpec& pump, const CrystalSpec& crystal) {
  const BaseAngles b = base_angles(base, crystal);
  const auto [dts, dti] = internal_deviation(dev, b);
  const double arg = b.n_s / base.lambda_s * std::cos(b.ts_int) * dts -
                     b.n_i / base.lambda_i * std::cos(b.ti_int) * dti;
  const double pref = 2.0 * constants::pi * pump.beam_diameter_a;
  return std::exp(-pref * pref / 4.0 * arg * arg);
}

double f_z(const AngularDeviation& dev, const PhaseMatchPoint& base,
           const CrystalSpec& crystal) {
  const BaseAngles b = base_angles(base, crystal);
  const auto [dts, dti] = internal_deviation(dev, b);
  const double arg = constants::pi * crystal.length_l *
                     (b.n_s / base.lambda_s * std::sin(b.ts_int) * dts +
                      b.n_i / base.lambda_i * std::sin(b.ti_int) * dti);
  return sinc(arg);
}

double correlation(const AngularDeviation& dev, const PhaseMatchPoint& base,
                   const PumpSpec& pump, const CrystalSpec& crystal) {
  const double f = f_x(dev, base, pump, crystal) * f_z(dev, base, crystal);
  return f * f;
}

AmplitudeMap correlation_map(const PhaseMatchPoint& base, const PumpSpec& pump,
                             const CrystalSpec& crystal, const GridSpec& grid) {
  if (grid.n_s < 2 || grid.n_i < 2) {
    throw std::invalid_argument("correlation map needs at least 2 points per axis");
  }
  AmplitudeMap map;
  map.base_point = base;
  map.frame = grid.frame;
  map.pump_diameter_a = pump.beam_diameter_a;
  map.crystal_length_l = crystal.length_l;
  map.grid_s.resize(static_cast<size_t>(grid.n_s));
  map.grid_i.resize(static_cast<size_t>(grid.n_i));
  for (int k = 0; k < grid.n_s; ++k) {
    map.grid_s[static_cast<size_t>(k)] =
        grid.s_min + (grid.s_max - grid.s_min) * k / (grid.n_s - 1);
  }
  for (int k = 0; k < grid.n_i; ++k) {
    map.grid_i[static_cast<size_t>(k)] =
        grid.i_min + (grid.i_max - grid.i_min) * k / (grid.n_i - 1);
  }
  const size_t total = map.grid_s.size() * map.grid_i.size();
  map.f_x.resize(total);
  map.f_z.resize(total);
  map.f_sq.resize(total);
  size_t idx = 0;
  for (double ds : map.grid_s) {
    for (double di : map.grid_i) {
      const AngularDeviation dev{ds, di, grid.frame};
      const double fx = f_x(dev, base, pump, crystal);
      const double fz = f_z(dev, base, crystal);
      map.f_x[idx] = fx;
      map.f_z[idx] = fz;
      map.f_sq[idx] = fx * fz * fx * fz;
      ++idx;
    }
  }
  return map;
}

}  // namespace biphoton
