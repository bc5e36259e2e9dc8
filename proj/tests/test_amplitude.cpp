#include <cmath>
#include <random>

#include "biphoton/amplitude.hpp"
#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"
#include "doctest.h"

using namespace biphoton;

namespace {

PumpSpec paper_pump() { return {351.1e-9, 100e-6, 1.0}; }

CrystalSpec degenerate_bbo() {
  const PumpSpec pump = paper_pump();
  CrystalSpec c = bbo_crystal(5e-3, 0.0);
  c.cut_angle_alpha = degenerate_cut_angle(pump, c);
  return c;
}

// internal-frame argument coefficients of the two factors at a base point
struct Coeffs {
  double cx_s, cx_i;  // f_x: (n/lambda) cos(theta_int)
  double cz_s, cz_i;  // f_z: (n/lambda) sin(theta_int)
};

Coeffs coeffs(const PhaseMatchPoint& p, const CrystalSpec& c) {
  const double ns = index_ordinary(p.lambda_s, c.ordinary);
  const double ni = index_ordinary(p.lambda_i, c.ordinary);
  return {ns / p.lambda_s * std::cos(std::abs(p.theta_s_int)),
          ni / p.lambda_i * std::cos(std::abs(p.theta_i_int)),
          ns / p.lambda_s * std::sin(std::abs(p.theta_s_int)),
          ni / p.lambda_i * std::sin(std::abs(p.theta_i_int))};
}

PhaseMatchPoint collinear_base(double lambda) {
  PhaseMatchPoint p;
  p.lambda_s = lambda;
  p.lambda_i = lambda;
  return p;  // all angles zero
}

}  // namespace

TEST_CASE("unnormalized sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(constants::pi) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(sinc(1e-9) == doctest::Approx(1.0 - 1e-18 / 6.0).epsilon(1e-16));
  CHECK(sinc(4.4934094579090641) == doctest::Approx(-0.21723362821122166).epsilon(1e-12));
}

TEST_CASE("f_x at the origin and on balanced same-side shifts") {
  const PumpSpec pump = paper_pump();
  const CrystalSpec c = degenerate_bbo();
  const PhaseMatchPoint base = solve_emission_angles(690e-9, pump, c);

  CHECK(f_x({0.0, 0.0, Frame::Internal}, base, pump, c) == 1.0);

  // deviations along the null direction of the difference term
  const Coeffs k = coeffs(base, c);
  for (double t : {1e-5, -3e-4, 2e-3}) {
    const AngularDeviation dev{t * k.cx_i, t * k.cx_s, Frame::Internal};
    CHECK(f_x(dev, base, pump, c) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("f_x frozen value at 690 nm") {
  const PumpSpec pump = paper_pump();
  const CrystalSpec c = degenerate_bbo();
  const PhaseMatchPoint base = solve_emission_angles(690e-9, pump, c);
  const AngularDeviation dev{5e-5, 0.0, Frame::Internal};

  // direct formula evaluation with test-local arithmetic
  const double arg = index_ordinary(base.lambda_s, c.ordinary) / base.lambda_s *
                     std::cos(base.theta_s_int) * 5e-5;
  const double pref = 2.0 * constants::pi * pump.beam_diameter_a;
  const double expected = std::exp(-pref * pref / 4.0 * arg * arg);
  CHECK(f_x(dev, base, pump, c) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(f_x(dev, base, pump, c) == doctest::Approx(0.99856379221402114).epsilon(1e-12));
}

TEST_CASE("f_z zeros, origin and the collinear degenerate base") {
  const PumpSpec pump = paper_pump();
  const CrystalSpec c = degenerate_bbo();
  const PhaseMatchPoint base = solve_emission_angles(690e-9, pump, c);

  CHECK(f_z({0.0, 0.0, Frame::Internal}, base, c) == 1.0);

  // deviation placing the argument exactly at the first zero
  const Coeffs k = coeffs(base, c);
  const double dts = 1.0 / (c.length_l * k.cz_s);
  CHECK(std::abs(f_z({dts, 0.0, Frame::Internal}, base, c)) < 1e-12);

  // at a collinear base the argument vanishes identically
  const PhaseMatchPoint col = collinear_base(2 * pump.wavelength_p);
  for (double t : {-0.05, 1e-4, 0.02}) {
    CHECK(f_z({t, -0.3 * t, Frame::Internal}, col, c) == 1.0);
  }
}

TEST_CASE("f_z is unchanged along its null direction") {
  const PumpSpec pump = paper_pump();
  const CrystalSpec c = degenerate_bbo();
  const PhaseMatchPoint base = solve_emission_angles(660e-9, pump, c);
  const Coeffs k = coeffs(base, c);
  const double nz = std::hypot(k.cz_i, k.cz_s);
  const double nx = std::hypot(k.cx_i, k.cx_s);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-2e-3, 2e-3);
  for (int i = 0; i < 50; ++i) {
    const AngularDeviation dev{d(rng), d(rng), Frame::Internal};
    const double t = d(rng);
    const AngularDeviation shifted{dev.d_theta_s + t * k.cz_i / nz,
                                   dev.d_theta_i - t * k.cz_s / nz, Frame::Internal};
    CHECK(f_z(shifted, base, c) == doctest::Approx(f_z(dev, base, c)).epsilon(1e-12));
    const AngularDeviation xshift{dev.d_theta_s + t * k.cx_i / nx,
                                  dev.d_theta_i + t * k.cx_s / nx, Frame::Internal};
    CHECK(f_x(xshift, base, pump, c) ==
          doctest::Approx(f_x(dev, base, pump, c)).epsilon(1e-12));
  }
}

TEST_CASE("f_x ridge orientation equals atan of the coefficient ratio") {
  const PumpSpec pump = paper_pump();
  const CrystalSpec c = degenerate_bbo();
  const PhaseMatchPoint base = solve_emission_angles(690e-9, pump, c);
  const Coeffs k = coeffs(base, c);
  const double analytic = std::atan2(k.cx_s, k.cx_i);

  // numeric probe: f_x on a circle of radius r falls off symmetrically about
  // the ridge, so the midpoint of the two half crossings locates it
  const double r = 3e-3;
  auto fval = [&](double phi) {
    return f_x({r * std::cos(phi), r * std::sin(phi), Frame::Internal}, base, pump, c);
  };
  auto half_crossing = [&](double inside, double outside) {
    for (int i = 0; i < 120; ++i) {
      const double mid = 0.5 * (inside + outside);
      if (fval(mid) > 0.5) inside = mid; else outside = mid;
    }
    return 0.5 * (inside + outside);
  };
  const double left = half_crossing(analytic, analytic - 0.5);
  const double right = half_crossing(analytic, analytic + 0.5);
  CHECK(0.5 * (left + right) == doctest::Approx(analytic).epsilon(1e-9));
}

TEST_CASE("correlation map fills bounds, origin and separability") {
  const PumpSpec pump = paper_pump();
  const CrystalSpec c = degenerate_bbo();
  const PhaseMatchPoint base = solve_emission_angles(690e-9, pump, c);

  GridSpec grid;
  grid.n_s = grid.n_i = 41;
  const AmplitudeMap map = correlation_map(base, pump, c, grid);

  double max_fsq = -1.0;
  for (int is = 0; is < map.n_s(); ++is) {
    for (int ii = 0; ii < map.n_i(); ++ii) {
      const double fx = map.at(map.f_x, is, ii);
      const double fz = map.at(map.f_z, is, ii);
      const double fsq = map.at(map.f_sq, is, ii);
      CHECK(fx > 0.0);
      CHECK(fx <= 1.0);
      CHECK(fz >= -0.2173);
      CHECK(fz <= 1.0);
      CHECK(fsq >= 0.0);
      CHECK(fsq <= 1.0);
      // separability recomputed independently
      const AngularDeviation dev{map.grid_s[is], map.grid_i[ii], grid.frame};
      CHECK(fsq == doctest::Approx(std::pow(f_x(dev, base, pump, c) * f_z(dev, base, c), 2))
                       .epsilon(1e-12));
      max_fsq = std::max(max_fsq, fsq);
    }
  }
  // origin on-grid (odd count, symmetric range): all factors 1 there
  const int mid = 20;
  CHECK(map.grid_s[mid] == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));
  CHECK(map.at(map.f_x, mid, mid) == 1.0);
  CHECK(map.at(map.f_z, mid, mid) == 1.0);
  CHECK(map.at(map.f_sq, mid, mid) == 1.0);
  CHECK(max_fsq == 1.0);

  GridSpec bad;
  bad.n_s = 1;
  CHECK_THROWS_AS(correlation_map(base, pump, c, bad), std::invalid_argument);
}

TEST_CASE("degeneracy symmetry of the correlation") {
  const PumpSpec pump = paper_pump();
  const CrystalSpec c = degenerate_bbo();
  const PhaseMatchPoint base = solve_emission_angles(2 * pump.wavelength_p, pump, c);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-4e-3, 4e-3);
  for (int i = 0; i < 100; ++i) {
    const double u = d(rng), v = d(rng);
    const double a = correlation({u, v, Frame::External}, base, pump, c);
    const double b = correlation({v, u, Frame::External}, base, pump, c);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("pump diameter and crystal length scaling") {
  const PumpSpec pump = paper_pump();
  const CrystalSpec c = degenerate_bbo();
  const PhaseMatchPoint base = solve_emission_angles(690e-9, pump, c);
  const Coeffs k = coeffs(base, c);

  // 1/e half-width of F_x along its sensitive direction halves when a doubles
  auto fx_halfwidth = [&](const PumpSpec& p) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double v =
          f_x({mid * k.cx_s, -mid * k.cx_i, Frame::Internal}, base, p, c);
      if (v > std::exp(-1.0)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  PumpSpec doubled = pump;
  doubled.beam_diameter_a *= 2.0;
  CHECK(fx_halfwidth(pump) == doctest::Approx(2.0 * fx_halfwidth(doubled)).epsilon(1e-6));

  // first-zero spacing of F_z halves when l doubles; march to the first sign
  // change, then bisect inside it
  auto fz_first_zero = [&](const CrystalSpec& cc) {
    const double march = 1e-4;
    double lo = 0.0, hi = march;
    while (f_z({hi, hi, Frame::Internal}, base, cc) > 0.0) {
      lo = hi;
      hi += march;
    }
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (f_z({mid, mid, Frame::Internal}, base, cc) > 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  CrystalSpec longer = c;
  longer.length_l *= 2.0;
  CHECK(fz_first_zero(c) == doctest::Approx(2.0 * fz_first_zero(longer)).epsilon(1e-6));
}

TEST_CASE("f_z diagonal half-width grows toward degeneracy") {
  const PumpSpec pump = paper_pump();
  const CrystalSpec c = degenerate_bbo();
  auto diag_halfwidth = [&](double lambda_s) {
    const PhaseMatchPoint base = solve_emission_angles(lambda_s, pump, c);
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (f_z({mid, mid, Frame::External}, base, c) > 0.5) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double w650 = diag_halfwidth(650e-9);
  const double w690 = diag_halfwidth(690e-9);
  const double w698 = diag_halfwidth(698e-9);
  CHECK(w650 < w690);
  CHECK(w690 < w698);
}
