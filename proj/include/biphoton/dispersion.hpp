#pragma once

#include <string>

namespace biphoton {

// n^2(lambda) = b0 + b1/(lambda^2 - b2) - b3*lambda^2, lambda in micrometers.
struct SellmeierSet {
  double b0 = 0.0;       // dimensionless
  double b1_um2 = 0.0;   // um^2
  double b2_um2 = 0.0;   // um^2, pole position; must stay below (0.3 um)^2
  double b3_per_um2 = 0.0;
};

struct CrystalSpec {
  std::string name = "BBO";
  double length_l = 5e-3;          // m
  double cut_angle_alpha = 0.0;    // rad, optic axis to pump
  SellmeierSet ordinary;
  SellmeierSet extraordinary;
};

// Supported wavelength range; the Sellmeier form is not trusted outside.
inline constexpr double wavelength_min_m = 300e-9;
inline constexpr double wavelength_max_m = 800e-9;

// Ordinary index n_o(lambda). Throws std::out_of_range outside the
// supported range, naming the admissible interval.
double index_ordinary(double lambda_m, const SellmeierSet& set);

// Principal extraordinary index n_E(lambda) (propagation normal to the axis).
double index_extraordinary_principal(double lambda_m, const CrystalSpec& crystal);

// n_e(theta): 1/n_e^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_E^2,
// theta measured from the optic axis.
double index_extraordinary_at_angle(double lambda_m, double theta,
                                    const CrystalSpec& crystal);

// Standard literature BBO coefficient sets (lambda in um).
SellmeierSet bbo_ordinary_set();
SellmeierSet bbo_extraordinary_set();

// BBO crystal with the given length and cut angle.
CrystalSpec bbo_crystal(double length_l, double cut_angle_alpha);

// Validates the invariants of a coefficient set (pole below range, n^2 > 1
// across the supported range). Throws std::invalid_argument naming `what`.
void validate_sellmeier(const SellmeierSet& set, const std::string& what);

}  // namespace biphoton
