#pragma once

namespace biphoton::constants {

inline constexpr double pi = 3.14159265358979323846;

// CODATA values, recorded in every output header for reproducibility.
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double c_m_s = 2.99792458e8;
inline constexpr double h_J_s = 2.0 * pi * hbar_J_s;

inline constexpr const char* tool_version = "1.0.0";

}  // namespace biphoton::constants
