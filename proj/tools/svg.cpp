#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace biphoton::plot {

namespace {

constexpr double width = 640.0, height = 440.0;
constexpr double margin_l = 70.0, margin_r = 20.0, margin_t = 20.0, margin_b = 50.0;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span() const { return (hi > lo) ? hi - lo : 1.0; }
};

}  // namespace

std::string line_plot(const std::vector<std::pair<double, double>>& samples,
                      const std::string& x_label, const std::string& y_label) {
  Range rx, ry;
  for (const auto& [x, y] : samples) {
    rx.add(x);
    ry.add(y);
  }
  const double pw = width - margin_l - margin_r;
  const double ph = height - margin_t - margin_b;
  auto sx = [&](double x) { return margin_l + (x - rx.lo) / rx.span() * pw; };
  auto sy = [&](double y) { return margin_t + ph - (y - ry.lo) / ry.span() * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << margin_l << "\" y=\"" << margin_t << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : samples) svg << num(sx(x)) << "," << num(sy(y)) << " ";
  svg << "\"/>\n";
  svg << "<text x=\"" << margin_l + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << margin_t + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << margin_t + ph / 2 << ")\">" << y_label << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = rx.lo + rx.span() * k / 4.0;
    const double fy = ry.lo + ry.span() * k / 4.0;
    svg << "<text x=\"" << num(sx(fx)) << "\" y=\"" << height - margin_b + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << num(fx) << "</text>\n";
    svg << "<text x=\"" << margin_l - 6 << "\" y=\"" << num(sy(fy) + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << num(fy) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string heatmap(const AmplitudeMap& map) {
  const int ns = map.n_s(), ni = map.n_i();
  const double pw = width - margin_l - margin_r;
  const double ph = height - margin_t - margin_b;
  const double cw = pw / ns, ch = ph / ni;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int is = 0; is < ns; ++is) {
    for (int ii = 0; ii < ni; ++ii) {
      const double v = std::clamp(map.at(map.f_sq, is, ii), 0.0, 1.0);
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      svg << "<rect x=\"" << num(margin_l + is * cw) << "\" y=\""
          << num(margin_t + ph - (ii + 1) * ch) << "\" width=\"" << num(cw + 0.5)
          << "\" height=\"" << num(ch + 0.5) << "\" fill=\"rgb(" << shade << ","
          << shade << "," << shade << ")\"/>\n";
    }
  }
  svg << "<rect x=\"" << margin_l << "\" y=\"" << margin_t << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << margin_l + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">d_theta_s (rad)</text>\n"
      << "<text x=\"16\" y=\"" << margin_t + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << margin_t + ph / 2 << ")\">d_theta_i (rad)</text>\n"
      << "</svg>\n";
  return svg.str();
}

}  // namespace biphoton::plot
