#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "biphoton/errors.hpp"
#include "biphoton/kinetics.hpp"
#include "doctest.h"

using namespace biphoton;

namespace {

constexpr double max_intensity = 1.4551309082687576;  // 1.4 nW in a 35 um spot

Trace synthetic_biexp(double a1, double tau1, double a2, double tau2, double c,
                      int points, double span) {
  Trace t;
  for (int k = 0; k < points; ++k) {
    const double x = span * k / (points - 1);
    t.times.push_back(x);
    t.values.push_back(a1 * std::exp(-x / tau1) + a2 * std::exp(-x / tau2) + c);
  }
  return t;
}

}  // namespace

TEST_CASE("dark start stays at the base sensitivity") {
  const TrapModel m = default_trap_model();
  const Trace t = simulate_sensitization(m, {{100.0, 0.0}}, 100.0, 0.25);
  for (double v : t.values) CHECK(v == m.base_sensitivity);
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("integration step is guarded by the stability limit") {
  const TrapModel m = default_trap_model();
  // limit = min(tau2, 1/(c_j I))/10 = 0.5 s at the calibration intensity
  CHECK_THROWS_AS(
      simulate_sensitization(m, {{100.0, max_intensity}}, 100.0, 0.6),
      StabilityError);
  CHECK_NOTHROW(simulate_sensitization(m, {{100.0, max_intensity}}, 100.0, 0.4));
}

TEST_CASE("schedule validation") {
  const TrapModel m = default_trap_model();
  CHECK_THROWS_AS(simulate_sensitization(m, {}, 10.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sensitization(m, {{5.0, 1.0}}, 10.0, 0.1),
                  std::invalid_argument);  // does not cover horizon
  CHECK_THROWS_AS(
      simulate_sensitization(m, {{5.0, 1.0}, {4.0, 0.0}}, 4.0, 0.1),
      std::invalid_argument);  // not increasing
}

TEST_CASE("constant-intensity segments match the closed-form exponential") {
  // single observable trap so the sensitivity exposes N1 directly
  TrapModel m = default_trap_model();
  m.gain1 = 1.0;
  m.gain2 = 0.0;
  m.base_sensitivity = 1.0;
  const double intensity = max_intensity;
  const double k_eff = m.trap1.fill_coeff * intensity + 1.0 / m.trap1.lifetime;
  const double n_eq = m.trap1.fill_coeff * intensity * m.trap1.capacity * k_eff ==
                              0.0
                          ? 0.0
                          : m.trap1.fill_coeff * intensity * m.trap1.capacity / k_eff;
  const Trace t = simulate_sensitization(m, {{400.0, intensity}}, 400.0, 0.25);
  for (size_t k = 0; k < t.times.size(); ++k) {
    const double expected = n_eq * (1.0 - std::exp(-k_eff * t.times[k]));
    const double n1 = t.values[k] - 1.0;
    CHECK(n1 == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("dark relaxation of loaded traps is exactly bi-exponential") {
  TrapModel m = default_trap_model();
  const double n1_0 = 0.61, n2_0 = 0.43;
  const Trace t = simulate_sensitization(m, {{200.0, 0.0}}, 200.0, 0.25, n1_0, n2_0);
  for (size_t k = 0; k < t.times.size(); ++k) {
    const double expected =
        m.base_sensitivity *
        (1.0 + m.gain1 * n1_0 * std::exp(-t.times[k] / m.trap1.lifetime) +
         m.gain2 * n2_0 * std::exp(-t.times[k] / m.trap2.lifetime));
    CHECK(t.values[k] == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("sensitization is monotone and intensity-ordered") {
  const TrapModel m = default_trap_model();
  const Trace low = simulate_sensitization(m, {{300.0, 0.4 * max_intensity}}, 300.0, 0.25);
  const Trace high = simulate_sensitization(m, {{300.0, max_intensity}}, 300.0, 0.25);
  for (size_t k = 1; k < high.values.size(); ++k) {
    CHECK(high.values[k] >= high.values[k - 1]);
    CHECK(high.values[k] >= low.values[k]);
  }
}

TEST_CASE("calibrated model rises more than 10x in about 100 s and saturates") {
  const TrapModel m = default_trap_model();
  const Trace t = simulate_sensitization(m, {{400.0, max_intensity}}, 400.0, 0.25);
  const size_t i100 = 400;  // t = 100 s at step 0.25
  CHECK(t.times[i100] == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(t.values[i100] / t.values[0] > 10.0);
  // relative slope below 1 %/s from 100 s on
  for (size_t k = i100; k + 4 < t.values.size(); k += 4) {
    const double slope = (t.values[k + 4] - t.values[k]) / 1.0;
    CHECK(slope / t.values[k] < 0.01);
  }
}

TEST_CASE("noiseless bi-exponential recovery") {
  const Trace t = synthetic_biexp(1.0, 100.0, 1.0, 5.0, 0.1, 200, 400.0);
  const DecayFit fit = fit_biexponential(t);
  CHECK(fit.converged);
  CHECK_FALSE(fit.rank_deficient);
  CHECK(fit.tau1 == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(fit.tau2 == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(fit.a1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.a2 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.offset == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(fit.rms_residual < 1e-9);
  CHECK(fit.tau1 > fit.tau2);
}

TEST_CASE("noisy recovery stays within 5 percent in the median") {
  const Trace clean = synthetic_biexp(1.0, 100.0, 1.0, 5.0, 0.1, 200, 400.0);
  std::vector<double> err1, err2;
  for (unsigned seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Trace noisy = clean;
    for (double& v : noisy.values) v *= 1.0 + 0.01 * gauss(rng);
    const DecayFit fit = fit_biexponential(noisy);
    err1.push_back(std::abs(fit.tau1 - 100.0) / 100.0);
    err2.push_back(std::abs(fit.tau2 - 5.0) / 5.0);
  }
  std::sort(err1.begin(), err1.end());
  std::sort(err2.begin(), err2.end());
  CHECK(err1[err1.size() / 2] < 0.05);
  CHECK(err2[err2.size() / 2] < 0.05);
}

TEST_CASE("weights: uniform sigmas reproduce the unweighted fit") {
  Trace t = synthetic_biexp(2.0, 80.0, 0.7, 4.0, 0.3, 150, 300.0);
  const DecayFit plain = fit_biexponential(t);
  t.sigmas.assign(t.values.size(), 0.02);
  const DecayFit weighted = fit_biexponential(t);
  CHECK(weighted.tau1 == doctest::Approx(plain.tau1).epsilon(1e-7));
  CHECK(weighted.tau2 == doctest::Approx(plain.tau2).epsilon(1e-7));
}

TEST_CASE("degenerate fits") {
  // constant trace: amplitudes vanish, offset is the mean
  Trace flat;
  for (int k = 0; k < 20; ++k) {
    flat.times.push_back(k);
    flat.values.push_back(3.25);
  }
  const DecayFit fit = fit_biexponential(flat);
  CHECK(fit.rank_deficient);
  CHECK(fit.converged);
  CHECK(fit.a1 == 0.0);
  CHECK(fit.a2 == 0.0);
  CHECK(fit.offset == doctest::Approx(3.25).epsilon(1e-12));

  Trace tiny = synthetic_biexp(1.0, 10.0, 0.5, 2.0, 0.0, 4, 10.0);
  CHECK_THROWS_AS(fit_biexponential(tiny), std::invalid_argument);

  Trace swapped = synthetic_biexp(1.0, 10.0, 0.5, 2.0, 0.0, 20, 10.0);
  std::swap(swapped.times[3], swapped.times[4]);
  CHECK_THROWS_AS(fit_biexponential(swapped), std::invalid_argument);
}

TEST_CASE("fit of the simulated dark relaxation recovers the lifetimes") {
  const TrapModel m = default_trap_model();
  const Trace full = simulate_sensitization(
      m, {{400.0, max_intensity}, {800.0, 0.0}}, 800.0, 0.25);
  Trace dark;
  for (size_t k = 0; k < full.times.size(); ++k) {
    if (full.times[k] >= 400.0) {
      dark.times.push_back(full.times[k] - 400.0);
      dark.values.push_back(full.values[k]);
    }
  }
  const DecayFit fit = fit_biexponential(dark);
  CHECK(fit.converged);
  CHECK(fit.tau1 == doctest::Approx(m.trap1.lifetime).epsilon(1e-4));
  CHECK(fit.tau2 == doctest::Approx(m.trap2.lifetime).epsilon(1e-4));
}

TEST_CASE("position response law") {
  const GaussianSpot spot{9.62112750161874e-10, 1.48e-3};
  const double r0 = response_vs_position(0.0, spot, 1.4e-9, 1.0);
  CHECK(r0 == doctest::Approx(1.4e-9 * 1.4e-9 / spot.waist_area_A0).epsilon(1e-13));
  for (double z : {0.2e-3, 0.9e-3, 2.5e-3}) {
    const double u = z / spot.rayleigh_length_zr;
    CHECK(response_vs_position(z, spot, 1.4e-9, 1.0) ==
          doctest::Approx(r0 / (1.0 + u * u)).epsilon(1e-12));
    CHECK(response_vs_position(z, spot, 1.4e-9, 1.0) ==
          doctest::Approx(response_vs_position(-z, spot, 1.4e-9, 1.0)).epsilon(1e-13));
  }
  CHECK(response_vs_position(spot.rayleigh_length_zr, spot, 1.4e-9, 1.0) ==
        doctest::Approx(0.5 * r0).epsilon(1e-12));
  CHECK_THROWS_AS(response_vs_position(0.0, GaussianSpot{0.0, 1.0}, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("model validation") {
  TrapModel bad = default_trap_model();
  bad.trap2.lifetime = 200.0;  // violates tau1 > tau2
  CHECK_THROWS_AS(simulate_sensitization(bad, {{10.0, 0.0}}, 10.0, 0.1),
                  std::invalid_argument);
}
