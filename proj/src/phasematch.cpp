#include "biphoton/phasematch.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

constexpr double two_pi = 2.0 * constants::pi;
constexpr double theta_bracket_max = 0.2;  // rad, small-angle solver domain

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[192];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

double conjugate_wavelength(double lambda_s, const PumpSpec& pump) {
  if (!(lambda_s > pump.wavelength_p)) {
    throw std::domain_error(fmt(
        "signal wavelength %.6g m must exceed the pump wavelength %.6g m",
        lambda_s, pump.wavelength_p));
  }
  return 1.0 / (1.0 / pump.wavelength_p - 1.0 / lambda_s);
}

double degenerate_cut_angle(const PumpSpec& pump, const CrystalSpec& crystal) {
  const double target = index_ordinary(2.0 * pump.wavelength_p, crystal.ordinary);
  auto f = [&](double alpha) {
    return index_extraordinary_at_angle(pump.wavelength_p, alpha, crystal) - target;
  };
  double lo = 0.0, hi = constants::pi / 2.0;
  double flo = f(lo), fhi = f(hi);
  if (!(flo == 0.0 || fhi == 0.0 || (flo > 0.0) != (fhi > 0.0))) {
    throw NoSolutionError(
        "no cut angle matches n_e(lambda_p, alpha) = n_o(2 lambda_p): "
        "the index equation has no sign change on [0, pi/2]");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) { lo = hi = mid; break; }
    if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
  }
  // Newton polish on the bisection estimate
  double alpha = 0.5 * (lo + hi);
  const double h = 1e-7;
  for (int i = 0; i < 4; ++i) {
    const double df = (f(alpha + h) - f(alpha - h)) / (2.0 * h);
    if (df == 0.0) break;
    const double step = f(alpha) / df;
    alpha -= step;
    if (std::abs(step) < 1e-15) break;
  }
  // Land on the side where n_e(alpha) <= n_o(2 lambda_p) so the degenerate
  // wavelength itself stays on the solvable branch.
  for (int i = 0; i < 8 && f(alpha) > 0.0; ++i) {
    alpha = std::nextafter(alpha, constants::pi / 2.0);
  }
  if (std::abs(f(alpha)) > 1e-12) {
    throw NoSolutionError("degenerate cut angle refinement failed to reach residual 1e-12");
  }
  return alpha;
}

double internal_to_external(double theta_int, double lambda_m,
                            const CrystalSpec& crystal) {
  const double n = index_ordinary(lambda_m, crystal.ordinary);
  const double s = n * std::sin(std::abs(theta_int));
  if (s >= 1.0) {
    throw std::domain_error(fmt(
        "internal angle %.6g rad exceeds the total-internal-reflection bound "
        "asin(1/n) at this wavelength", theta_int));
  }
  return std::copysign(std::asin(s), theta_int);
}

double external_to_internal(double theta_ext, double lambda_m,
                            const CrystalSpec& crystal) {
  const double n = index_ordinary(lambda_m, crystal.ordinary);
  return std::copysign(std::asin(std::sin(std::abs(theta_ext)) / n), theta_ext);
}

double pump_wavenumber(const PumpSpec& pump, const CrystalSpec& crystal) {
  return two_pi *
         index_extraordinary_at_angle(pump.wavelength_p, crystal.cut_angle_alpha,
                                      crystal) /
         pump.wavelength_p;
}

double wavevector_mismatch(const PhaseMatchPoint& point, const PumpSpec& pump,
                           const CrystalSpec& crystal) {
  const double ks = two_pi * index_ordinary(point.lambda_s, crystal.ordinary) /
                    point.lambda_s;
  const double ki = two_pi * index_ordinary(point.lambda_i, crystal.ordinary) /
                    point.lambda_i;
  const double kp = pump_wavenumber(pump, crystal);
  const double kx = ks * std::sin(point.theta_s_int) + ki * std::sin(point.theta_i_int);
  const double kz = ks * std::cos(point.theta_s_int) + ki * std::cos(point.theta_i_int) - kp;
  return std::hypot(kx, kz);
}

PhaseMatchPoint solve_emission_angles(double lambda_s, const PumpSpec& pump,
                                      const CrystalSpec& crystal) {
  const double lambda_i = conjugate_wavelength(lambda_s, pump);
  const double ns = index_ordinary(lambda_s, crystal.ordinary);
  const double ni = index_ordinary(lambda_i, crystal.ordinary);
  const double np = index_extraordinary_at_angle(pump.wavelength_p,
                                                 crystal.cut_angle_alpha, crystal);
  const double cs = ns / lambda_s;  // k_s / 2 pi
  const double ci = ni / lambda_i;
  const double cp = np / pump.wavelength_p;

  // Longitudinal imbalance at signal angle ts, with ti eliminated through
  // the transverse balance cs sin(ts) = ci sin(ti).
  auto g = [&](double ts) {
    const double st = cs * std::sin(ts) / ci;
    if (st > 1.0) return -std::numeric_limits<double>::infinity();
    return cs * std::cos(ts) + ci * std::cos(std::asin(st)) - cp;
  };

  const double g0 = g(0.0);
  if (std::isnan(g0)) {
    throw std::runtime_error("phase-match solver: non-finite longitudinal balance");
  }
  if (g0 < 0.0) {
    throw NoSolutionError(fmt(
        "no phase-matched emission at lambda_s = %.6g m for cut angle %.6g rad "
        "(outside the tuning range of this cut)", lambda_s,
        crystal.cut_angle_alpha));
  }
  double lo = 0.0, hi = theta_bracket_max;
  if (g(hi) > 0.0) {
    throw NoSolutionError(fmt(
        "no phase-matched emission below %.2g rad internal at lambda_s = %.6g m",
        theta_bracket_max, lambda_s));
  }
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) { lo = hi = mid; break; }
    if (gm > 0.0) lo = mid; else hi = mid;
  }

  PhaseMatchPoint p;
  p.lambda_s = lambda_s;
  p.lambda_i = lambda_i;
  p.theta_s_int = 0.5 * (lo + hi);
  p.theta_i_int = -std::asin(cs * std::sin(p.theta_s_int) / ci);
  p.theta_s_ext = internal_to_external(p.theta_s_int, lambda_s, crystal);
  p.theta_i_ext = internal_to_external(p.theta_i_int, lambda_i, crystal);
  p.residual = wavevector_mismatch(p, pump, crystal);
  return p;
}

double angle_derivative_wrt_cut(double lambda_s, const PumpSpec& pump,
                                const CrystalSpec& crystal, Photon which,
                                double step) {
  if (!(step > 0.0)) throw std::invalid_argument("derivative step must be positive");
  auto solve_at = [&](double alpha) {
    CrystalSpec c = crystal;
    c.cut_angle_alpha = alpha;
    return solve_emission_angles(lambda_s, pump, c);
  };
  auto solvable = [&](double alpha) {
    try {
      solve_at(alpha);
      return true;
    } catch (const NoSolutionError&) {
      return false;
    }
  };
  const double alpha = crystal.cut_angle_alpha;
  double d = step;
  bool found = false;
  for (; d >= 1e-9; d *= 0.5) {
    if (solvable(alpha + d) && solvable(alpha - d)) { found = true; break; }
  }
  if (!found) {
    throw DerivativeUndefinedError(fmt(
        "d(theta_ext)/d(alpha) undefined at lambda_s = %.6g m: the tuning "
        "curve has its branch edge at the operating cut angle", lambda_s));
  }
  d *= 0.25;  // settle well inside the solvable margin
  const PhaseMatchPoint plus = solve_at(alpha + d);
  const PhaseMatchPoint minus = solve_at(alpha - d);
  const double tp = (which == Photon::Signal) ? plus.theta_s_ext : plus.theta_i_ext;
  const double tm = (which == Photon::Signal) ? minus.theta_s_ext : minus.theta_i_ext;
  return (tp - tm) / (2.0 * d);
}

std::vector<PhaseMatchPoint> tuning_curve(double lambda_min, double lambda_max,
                                          int samples, const PumpSpec& pump,
                                          const CrystalSpec& crystal) {
  if (samples < 2) throw std::invalid_argument("tuning curve needs at least 2 samples");
  if (!(lambda_min > 0.0 && lambda_min < lambda_max)) {
    throw std::invalid_argument("tuning curve needs 0 < lambda_min < lambda_max");
  }
  std::vector<PhaseMatchPoint> out;
  out.reserve(static_cast<size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double lam = lambda_min + (lambda_max - lambda_min) * k / (samples - 1);
    out.push_back(solve_emission_angles(lam, pump, crystal));
  }
  return out;
}

}  // namespace biphoton
