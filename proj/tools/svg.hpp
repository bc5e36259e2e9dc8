#pragma once

#include <string>
#include <utility>
#include <vector>

#include "biphoton/amplitude.hpp"

namespace biphoton::plot {

// Minimal standalone SVG line plot of (x, y) samples.
std::string line_plot(const std::vector<std::pair<double, double>>& samples,
                      const std::string& x_label, const std::string& y_label);

// Grayscale heatmap of a correlation map's f_sq.
std::string heatmap(const AmplitudeMap& map);

}  // namespace biphoton::plot
