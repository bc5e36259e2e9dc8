#include "biphoton/kinetics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

void validate_model(const TrapModel& m) {
  if (!(m.trap1.lifetime > m.trap2.lifetime && m.trap2.lifetime > 0.0)) {
    throw std::invalid_argument("trap model requires tau1 > tau2 > 0");
  }
  if (m.trap1.fill_coeff < 0.0 || m.trap2.fill_coeff < 0.0 || m.gain1 < 0.0 ||
      m.gain2 < 0.0 || m.trap1.capacity < 0.0 || m.trap2.capacity < 0.0 ||
      m.base_sensitivity < 0.0) {
    throw std::invalid_argument("trap model coefficients must be nonnegative");
  }
}

void validate_schedule(const IntensitySchedule& schedule, double horizon) {
  if (schedule.empty()) throw std::invalid_argument("empty intensity schedule");
  double prev = 0.0;
  for (const auto& s : schedule) {
    if (!(s.until_s > prev)) {
      throw std::invalid_argument("schedule steps must have increasing until_s");
    }
    if (s.intensity < 0.0) throw std::invalid_argument("negative intensity");
    prev = s.until_s;
  }
  if (schedule.back().until_s < horizon) {
    throw std::invalid_argument("intensity schedule does not cover the horizon");
  }
}

double intensity_at(const IntensitySchedule& schedule, double t) {
  for (const auto& s : schedule) {
    if (t < s.until_s) return s.intensity;
  }
  return schedule.back().intensity;
}

// dN/dt = c I (N_max - N) - N/tau, one RK4 step over [t, t+h] at constant I.
double rk4_step(double n, double h, double intensity, const Trap& trap) {
  auto f = [&](double x) {
    return trap.fill_coeff * intensity * (trap.capacity - x) - x / trap.lifetime;
  };
  const double k1 = f(n);
  const double k2 = f(n + 0.5 * h * k1);
  const double k3 = f(n + 0.5 * h * k2);
  const double k4 = f(n + h * k3);
  return n + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

TrapModel default_trap_model() {
  TrapModel m;
  m.trap1 = {1.0, 0.01374, 100.0};
  m.trap2 = {1.0, 0.1374, 5.0};
  m.base_sensitivity = 1.0;
  m.gain1 = 14.0;
  m.gain2 = 2.0;
  return m;
}

Trace simulate_sensitization(const TrapModel& model,
                             const IntensitySchedule& schedule, double horizon,
                             double step, double n1_initial, double n2_initial) {
  validate_model(model);
  if (!(step > 0.0) || !(horizon > 0.0)) {
    throw std::invalid_argument("step and horizon must be positive");
  }
  validate_schedule(schedule, horizon);

  double stability_limit = model.trap2.lifetime;
  for (const auto& s : schedule) {
    for (const Trap* trap : {&model.trap1, &model.trap2}) {
      const double fill_rate = trap->fill_coeff * s.intensity;
      if (fill_rate > 0.0) stability_limit = std::min(stability_limit, 1.0 / fill_rate);
    }
  }
  stability_limit /= 10.0;
  if (step > stability_limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "integration step %.6g s exceeds the stability limit %.6g s; "
                  "use a smaller step", step, stability_limit);
    throw StabilityError(buf);
  }

  auto sensitivity = [&](double n1, double n2) {
    return model.base_sensitivity * (1.0 + model.gain1 * n1 + model.gain2 * n2);
  };

  Trace trace;
  double n1 = n1_initial, n2 = n2_initial;
  double t = 0.0;
  trace.times.push_back(0.0);
  trace.values.push_back(sensitivity(n1, n2));
  const double eps = 1e-12 * std::max(horizon, step);
  while (t < horizon - eps) {
    double t_next = std::min(t + step, horizon);
    // advance in sub-steps that never straddle a schedule boundary
    double tc = t;
    while (tc < t_next - eps) {
      double boundary = t_next;
      for (const auto& s : schedule) {
        if (s.until_s > tc + eps && s.until_s < boundary) boundary = s.until_s;
      }
      const double h = boundary - tc;
      const double intensity = intensity_at(schedule, tc + 0.5 * h);
      n1 = rk4_step(n1, h, intensity, model.trap1);
      n2 = rk4_step(n2, h, intensity, model.trap2);
      tc = boundary;
    }
    t = t_next;
    trace.times.push_back(t);
    trace.values.push_back(sensitivity(n1, n2));
  }
  return trace;
}

namespace {

struct FitData {
  const std::vector<double>& t;
  const std::vector<double>& v;
  std::vector<double> w;  // weights
};

double fit_cost(const FitData& d, const std::array<double, 5>& p) {
  double c = 0.0;
  for (size_t k = 0; k < d.t.size(); ++k) {
    const double m = p[0] * std::exp(-d.t[k] / p[1]) +
                     p[2] * std::exp(-d.t[k] / p[3]) + p[4];
    const double r = m - d.v[k];
    c += d.w[k] * r * r;
  }
  return c;
}

// Solves the symmetric 5x5 system by Gaussian elimination with partial
// pivoting; throws RankDeficiencyError on a vanishing pivot.
std::array<double, 5> solve5(std::array<std::array<double, 5>, 5> a,
                             std::array<double, 5> b) {
  for (int col = 0; col < 5; ++col) {
    int piv = col;
    for (int r = col + 1; r < 5; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (!(std::abs(a[piv][col]) > 1e-300)) {
      throw RankDeficiencyError(
          "normal equations are singular; consider a single-exponential refit");
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 5; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 5> x{};
  for (int r = 4; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 5; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

// Tail offset seed: three-window geometric estimate over the last third,
// c = (m1 m3 - m2^2)/(m1 + m3 - 2 m2).
double tail_offset(const std::vector<double>& v) {
  const size_t n = v.size();
  const size_t i3 = 2 * n / 3;
  const size_t w = std::max<size_t>(n / 12, 2);
  auto mean = [&](size_t i0) {
    double s = 0.0;
    size_t cnt = 0;
    for (size_t k = i0; k < std::min(i0 + w, n); ++k, ++cnt) s += v[k];
    return s / static_cast<double>(cnt);
  };
  const double m1 = mean(i3);
  const double m2 = mean((i3 + n - w) / 2);
  const double m3 = mean(n - w);
  const double den = m1 + m3 - 2.0 * m2;
  if (std::abs(den) < 1e-300) return v.back();
  return (m1 * m3 - m2 * m2) / den;
}

// least-squares line a + b x
std::pair<double, double> line_fit(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) return {sy / n, 0.0};
  const double b = (n * sxy - sx * sy) / den;
  const double a = (sy - b * sx) / n;
  return {a, b};
}

std::array<double, 5> peel_guess(const std::vector<double>& t,
                                 const std::vector<double>& v) {
  const size_t n = t.size();
  const double vmin = *std::min_element(v.begin(), v.end());
  const double vmax = *std::max_element(v.begin(), v.end());
  const double range = vmax - vmin;
  const double span = t.back() - t.front();

  double c0 = tail_offset(v);
  if (!std::isfinite(c0) || c0 >= vmin) c0 = vmin - 1e-3 * range;

  // log-linear slope of the last third -> tau1, A1
  const size_t i3 = 2 * n / 3;
  std::vector<double> xs, ys;
  for (size_t k = i3; k < n; ++k) {
    xs.push_back(t[k]);
    ys.push_back(std::log(std::max(v[k] - c0, 1e-12 * range)));
  }
  const auto [a_tail, b_tail] = line_fit(xs, ys);
  double tau1 = (b_tail < 0.0) ? -1.0 / b_tail : span;
  double amp1 = std::exp(a_tail);

  // log-linear slope of the early residual -> tau2, A2
  xs.clear();
  ys.clear();
  const size_t n3 = std::max<size_t>(n / 3, 3);
  for (size_t k = 0; k < std::min(n3, n); ++k) {
    const double r = v[k] - c0 - amp1 * std::exp(-t[k] / tau1);
    if (r > 1e-6 * range) {
      xs.push_back(t[k]);
      ys.push_back(std::log(r));
    }
  }
  double tau2 = tau1 / 10.0, amp2 = 0.1 * amp1;
  if (xs.size() >= 2) {
    const auto [a_early, b_early] = line_fit(xs, ys);
    if (b_early < 0.0) tau2 = -1.0 / b_early;
    amp2 = std::exp(a_early);
  }
  return {amp1, tau1, amp2, tau2, c0};
}

}  // namespace

DecayFit fit_biexponential(const Trace& trace) {
  const auto& t = trace.times;
  const auto& v = trace.values;
  if (t.size() != v.size()) {
    throw std::invalid_argument("trace times and values differ in length");
  }
  if (t.size() < 5) {
    throw std::invalid_argument("bi-exponential fit needs at least 5 points");
  }
  for (size_t k = 1; k < t.size(); ++k) {
    if (!(t[k] > t[k - 1])) {
      throw std::invalid_argument("trace times must be strictly increasing");
    }
  }
  FitData d{t, v, {}};
  if (!trace.sigmas.empty()) {
    if (trace.sigmas.size() != v.size()) {
      throw std::invalid_argument("sigma array length mismatch");
    }
    d.w.reserve(v.size());
    for (double s : trace.sigmas) {
      if (!(s > 0.0)) throw std::invalid_argument("sigmas must be positive");
      d.w.push_back(1.0 / (s * s));
    }
  } else {
    d.w.assign(v.size(), 1.0);
  }

  const double vmin = *std::min_element(v.begin(), v.end());
  const double vmax = *std::max_element(v.begin(), v.end());
  DecayFit fit;
  if (vmax - vmin <= 1e-12 * std::max(std::abs(vmax), 1.0)) {
    // degenerate input: nothing to decay
    double mean = 0.0;
    for (double x : v) mean += x;
    fit.a1 = fit.a2 = 0.0;
    fit.tau1 = 2.0 * (t.back() - t.front());
    fit.tau2 = t.back() - t.front();
    fit.offset = mean / static_cast<double>(v.size());
    fit.converged = true;
    fit.rank_deficient = true;
    fit.rms_residual = 0.0;
    return fit;
  }

  std::array<double, 5> p = peel_guess(t, v);
  double lambda = 1e-3;
  double cost = fit_cost(d, p);
  int it = 0;
  bool converged = false;
  while (it < 200) {
    // damped normal equations (J^T W J + lambda diag) dp = -J^T W r
    std::array<std::array<double, 5>, 5> jtj{};
    std::array<double, 5> jtr{};
    for (size_t k = 0; k < t.size(); ++k) {
      const double e1 = std::exp(-t[k] / p[1]);
      const double e2 = std::exp(-t[k] / p[3]);
      const std::array<double, 5> row = {
          e1, p[0] * e1 * t[k] / (p[1] * p[1]), e2,
          p[2] * e2 * t[k] / (p[3] * p[3]), 1.0};
      const double r = p[0] * e1 + p[2] * e2 + p[4] - v[k];
      for (int a = 0; a < 5; ++a) {
        jtr[a] += d.w[k] * row[a] * r;
        for (int b = a; b < 5; ++b) jtj[a][b] += d.w[k] * row[a] * row[b];
      }
    }
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];
    }
    auto damped = jtj;
    for (int a = 0; a < 5; ++a) {
      damped[a][a] += lambda * std::max(jtj[a][a], 1e-300);
    }
    std::array<double, 5> jtr_neg{};
    for (int a = 0; a < 5; ++a) jtr_neg[a] = -jtr[a];
    const std::array<double, 5> dp = solve5(damped, jtr_neg);
    std::array<double, 5> pn{};
    for (int a = 0; a < 5; ++a) pn[a] = p[a] + dp[a];
    ++it;
    const bool feasible = pn[1] > 0.0 && pn[3] > 0.0;
    const double cn = feasible ? fit_cost(d, pn)
                               : std::numeric_limits<double>::infinity();
    if (cn < cost) {
      const double rel = (cost - cn) / std::max(cost, 1e-300);
      p = pn;
      cost = cn;
      lambda = std::max(lambda / 3.0, 1e-14);
      if (rel < 1e-10) {
        converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e14) {  // no descent direction left: at a minimum
        converged = true;
        break;
      }
    }
  }

  fit.a1 = p[0];
  fit.tau1 = p[1];
  fit.a2 = p[2];
  fit.tau2 = p[3];
  fit.offset = p[4];
  fit.iterations = it;
  fit.converged = converged;
  if (fit.tau1 < fit.tau2) {
    std::swap(fit.a1, fit.a2);
    std::swap(fit.tau1, fit.tau2);
  }
  double ss = 0.0;
  for (size_t k = 0; k < t.size(); ++k) {
    const double m = fit.a1 * std::exp(-t[k] / fit.tau1) +
                     fit.a2 * std::exp(-t[k] / fit.tau2) + fit.offset;
    ss += (m - v[k]) * (m - v[k]);
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(t.size()));
  return fit;
}

double response_vs_position(double z, const GaussianSpot& beam,
                            double total_power_w, double gain) {
  if (!(beam.waist_area_A0 > 0.0) || !(beam.rayleigh_length_zr > 0.0)) {
    throw std::invalid_argument("spot area and Rayleigh length must be positive");
  }
  const double u = z / beam.rayleigh_length_zr;
  const double area = beam.waist_area_A0 * (1.0 + u * u);
  return gain * total_power_w * total_power_w / area;
}

}  // namespace biphoton
