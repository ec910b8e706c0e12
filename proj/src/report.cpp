#include "wecfarm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wecfarm {

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

std::string power_colour(double value, double lo, double hi) {
  double t = hi > lo ? (value - lo) / (hi - lo) : 0.5;
  t = std::clamp(t, 0.0, 1.0);
  const int red = static_cast<int>(std::lround(255.0 * t));
  const int blue = 255 - red;
  char buffer[8];
  std::snprintf(buffer, sizeof buffer, "#%02x00%02x", red, blue);
  return buffer;
}

std::string caption(double power, double q) {
  return "Power=" + format_number(power) + " (Watt), q-factor=" + format_number(q);
}

std::string plot_layout_svg(const Layout& layout, std::span<const double> per_buoy, double total,
                            double q) {
  const double pad = 40.0;
  const double side = std::max(layout.side, 1.0);
  const double width = side + 2 * pad;
  const double height = side + 2 * pad + 30.0;
  double lo = 0.0, hi = 0.0;
  if (!per_buoy.empty()) {
    lo = *std::min_element(per_buoy.begin(), per_buoy.end());
    hi = *std::max_element(per_buoy.begin(), per_buoy.end());
  }
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width) << "\" height=\""
      << format_number(height) << "\" viewBox=\"0 0 " << format_number(width) << ' '
      << format_number(height) << "\">\n"
      << "  <rect x=\"" << format_number(pad) << "\" y=\"" << format_number(pad) << "\" width=\""
      << format_number(side) << "\" height=\"" << format_number(side)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& p = layout.positions[i];
    const double power = i < per_buoy.size() ? per_buoy[i] : lo;
    // SVG y grows downwards; farm y grows upwards.
    svg << "  <circle cx=\"" << format_number(pad + p.x) << "\" cy=\"" << format_number(pad + side - p.y)
        << "\" r=\"8\" fill=\"" << power_colour(power, lo, hi) << "\" stroke=\"black\">"
        << "<title>buoy " << i << ": " << format_number(power) << " W</title></circle>\n";
  }
  svg << "  <text x=\"" << format_number(pad) << "\" y=\"" << format_number(height - 12.0)
      << "\" font-family=\"sans-serif\" font-size=\"16\">" << caption(total, q) << "</text>\n"
      << "</svg>\n";
  return svg.str();
}

std::string results_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "statistic";
  for (const auto& a : result.algorithms) out << ',' << a.algorithm;
  out << '\n';
  const char* labels[] = {"Max", "Min", "Mean", "Median", "Std"};
  for (int row = 0; row < 5; ++row) {
    out << labels[row];
    for (const auto& a : result.algorithms) {
      const auto& s = a.stats;
      const double v[] = {s.max, s.min, s.mean, s.median, s.std};
      out << ',' << format_number(v[row]);
    }
    out << '\n';
  }
  return out.str();
}

std::string finals_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "algorithm,seed,final_power,evaluations,skipped\n";
  for (const auto& a : result.algorithms) {
    for (const auto& r : a.runs) {
      out << a.algorithm << ',' << r.seed << ',' << format_number(r.best_power) << ',' << r.evaluations
          << ',' << r.skipped << '\n';
    }
  }
  return out.str();
}

std::string friedman_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "algorithm,average_rank\n";
  for (std::size_t a = 0; a < result.algorithms.size() && a < result.friedman.size(); ++a) {
    out << result.algorithms[a].algorithm << ',' << format_number(result.friedman[a]) << '\n';
  }
  return out.str();
}

std::string removal_csv(const std::vector<RemovalStep>& steps) {
  std::ostringstream out;
  out << "remaining,power,q,removed\n";
  for (const auto& s : steps) {
    out << s.remaining << ',' << format_number(s.power) << ',' << format_number(s.q) << ',';
    if (s.removed) out << *s.removed;
    out << '\n';
  }
  return out.str();
}

std::string landscape_csv(const Landscape& scan) {
  std::ostringstream out;
  out << "x,y,masked,buoy_power,total_power\n";
  for (const auto& n : scan.nodes) {
    out << format_number(n.position.x) << ',' << format_number(n.position.y) << ','
        << (n.masked ? 1 : 0) << ',';
    if (!n.masked) out << format_number(n.buoy_power) << ',' << format_number(n.total_power);
    else out << ',';
    out << '\n';
  }
  return out.str();
}

}  // namespace wecfarm
