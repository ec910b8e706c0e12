#pragma once

#include <span>
#include <string>
#include <vector>

#include "wecfarm/harness.hpp"
#include "wecfarm/layout.hpp"

namespace wecfarm {

// Fixed six-decimal formatting used in every CSV and caption.
std::string format_number(double value);

// Linear map from [lo, hi] to blue (#0000ff) .. red (#ff0000); equal bounds
// give the midpoint colour.
std::string power_colour(double value, double lo, double hi);

// Farm boundary, one circle per buoy coloured by its power, and the caption
// "Power=<P> (Watt), q-factor=<q>".
std::string plot_layout_svg(const Layout& layout, std::span<const double> per_buoy, double total,
                            double q);

std::string caption(double power, double q);

// Rows Max, Min, Mean, Median, Std; one column per algorithm.
std::string results_csv(const ExperimentResult& result);
std::string finals_csv(const ExperimentResult& result);
std::string friedman_csv(const ExperimentResult& result);
std::string removal_csv(const std::vector<RemovalStep>& steps);
std::string landscape_csv(const Landscape& scan);

}  // namespace wecfarm
