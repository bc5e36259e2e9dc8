#include "biphoton/dispersion.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace biphoton {

namespace {

void check_range(double lambda_m) {
  if (!(lambda_m >= wavelength_min_m && lambda_m <= wavelength_max_m)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "wavelength %.6g m outside supported range [300 nm, 800 nm]",
                  lambda_m);
    throw std::out_of_range(buf);
  }
}

double n_squared(double lambda_m, const SellmeierSet& s) {
  const double lu = lambda_m * 1e6;  // um
  const double lu2 = lu * lu;
  return s.b0 + s.b1_um2 / (lu2 - s.b2_um2) - s.b3_per_um2 * lu2;
}

}  // namespace

double index_ordinary(double lambda_m, const SellmeierSet& set) {
  check_range(lambda_m);
  const double n2 = n_squared(lambda_m, set);
  if (!(n2 > 1.0)) {
    throw std::domain_error("Sellmeier set yields n^2 <= 1 inside the supported range");
  }
  return std::sqrt(n2);
}

double index_extraordinary_principal(double lambda_m, const CrystalSpec& crystal) {
  return index_ordinary(lambda_m, crystal.extraordinary);
}

double index_extraordinary_at_angle(double lambda_m, double theta,
                                    const CrystalSpec& crystal) {
  const double no = index_ordinary(lambda_m, crystal.ordinary);
  const double nE = index_ordinary(lambda_m, crystal.extraordinary);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return 1.0 / std::sqrt(c * c / (no * no) + s * s / (nE * nE));
}

SellmeierSet bbo_ordinary_set() { return {2.7405, 0.0184, 0.0179, 0.0155}; }

SellmeierSet bbo_extraordinary_set() { return {2.3730, 0.0128, 0.0156, 0.0044}; }

CrystalSpec bbo_crystal(double length_l, double cut_angle_alpha) {
  CrystalSpec c;
  c.name = "BBO";
  c.length_l = length_l;
  c.cut_angle_alpha = cut_angle_alpha;
  c.ordinary = bbo_ordinary_set();
  c.extraordinary = bbo_extraordinary_set();
  return c;
}

void validate_sellmeier(const SellmeierSet& set, const std::string& what) {
  if (!(set.b2_um2 < 0.3 * 0.3)) {
    throw std::invalid_argument(what + ": Sellmeier pole b2 = " +
                                std::to_string(set.b2_um2) +
                                " um^2 must lie below (0.3 um)^2");
  }
  for (double lam = wavelength_min_m; lam <= wavelength_max_m; lam += 10e-9) {
    if (!(n_squared(lam, set) > 1.0)) {
      throw std::invalid_argument(what + ": n^2(lambda) <= 1 inside the supported range");
    }
  }
}

}  // namespace biphoton
