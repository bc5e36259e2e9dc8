#pragma once

#include <vector>

namespace biphoton {

// One intermediate trap state: filled by illumination at rate
// c * I * (N_max - N), decaying as N/tau.
struct Trap {
  double capacity = 1.0;      // N_max, dimensionless population
  double fill_coeff = 0.0;    // c, m^2/(W s)
  double lifetime = 1.0;      // tau, s
};

// Two-trap sensitization model; the dark limit decays exactly
// bi-exponentially with the two lifetimes.
// Sensitivity s(t) = s0 (1 + beta1 N1 + beta2 N2).
struct TrapModel {
  Trap trap1;  // slow, lifetime > trap2.lifetime
  Trap trap2;  // fast
  double base_sensitivity = 1.0;  // s0
  double gain1 = 0.0;             // beta1
  double gain2 = 0.0;             // beta2
};

// Calibrated defaults: lifetimes 100 s / 5 s; fill and gain coefficients
// frozen so the 1.4 nW / 35 um illumination raises the sensitivity more
// than 10x in about 100 s and then saturates (scripts/calibrate_trap_defaults.py).
TrapModel default_trap_model();

// Piecewise-constant illumination: intensity holds until `until_s`; steps
// sorted by until_s, the last one covering the horizon.
struct ScheduleStep {
  double until_s = 0.0;
  double intensity = 0.0;  // W/m^2
};
using IntensitySchedule = std::vector<ScheduleStep>;

struct Trace {
  std::vector<double> times;   // s, strictly increasing
  std::vector<double> values;
  std::vector<double> sigmas;  // optional per-point standard deviations
};

// Classical fixed-step 4th-order integration of the trap equations,
// sampling s(t) every `step` from 0 to `horizon`. Segment boundaries split
// the step so each stage sees a constant intensity. Throws StabilityError
// when step > min(tau2, 1/(c_j I))/10.
Trace simulate_sensitization(const TrapModel& model,
                             const IntensitySchedule& schedule, double horizon,
                             double step, double n1_initial = 0.0,
                             double n2_initial = 0.0);

struct DecayFit {
  double a1 = 0.0;
  double tau1 = 0.0;  // s, canonical ordering tau1 > tau2 after fit
  double a2 = 0.0;
  double tau2 = 0.0;  // s
  double offset = 0.0;
  double rms_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool rank_deficient = false;
};

// Least-squares fit of A1 exp(-t/tau1) + A2 exp(-t/tau2) + C by damped
// Gauss-Newton (multiplicative damping raised on cost increase, lowered on
// success). Initial guess by tail-offset estimation and log-linear peeling:
// tau1 from the last third, tau2 from the early residual. Converges when
// the relative cost change drops below 1e-10, capped at 200 iterations.
// Inverse-variance weighting when sigmas are provided. A constant trace
// returns A1 = A2 = 0, C = mean, flagged rank_deficient; a singular damped
// solve throws RankDeficiencyError suggesting a single-exponential refit.
DecayFit fit_biexponential(const Trace& trace);

// Gaussian spot at the image plane.
struct GaussianSpot {
  double waist_area_A0 = 0.0;      // m^2
  double rayleigh_length_zr = 0.0; // m
};

// Slow quadratic detector: R(z) = gain P^2 / A(z),
// A(z) = A0 (1 + (z/z_R)^2); peak at the image plane.
double response_vs_position(double z, const GaussianSpot& beam,
                            double total_power_w, double gain);

}  // namespace biphoton
