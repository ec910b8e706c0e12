#pragma once

#include <cstddef>
#include <optional>

namespace wecfarm {

struct EAParams {
  std::size_t population = 12;  // lambda
  double scale = 0.5;           // F
  double scale0 = 0.5;          // F0 of the adaptive DE schedule
  double crossover = 0.8;       // P_cr
  double sigma_fraction = 0.1;  // 1+1EA step as a fraction of the farm side
  // Per-buoy mutation probability; 1/N when unset.
  std::optional<double> mutation_probability;
};

struct LsNmParams {
  std::size_t samples = 8;
  double sigma = 70.0;  // m
  std::size_t simplex_iterations = 50;
  double initial_edge = 10.0;
};

struct ClsParams {
  double sigma_start = 20.0;  // m
  double sigma_end = 1.0;     // m
};

struct DiscreteParams {
  double spacing = 50.0;  // m
  double elite_fraction = 0.1;
  double crossover_rate = 0.8;
  double mutation_rate = 0.1;
  double c1 = 2.0;
  double c2 = 2.0;
  double inertia_start = 2.0;
  double inertia_end = 1.5;
  bool inertia_clamp = false;
  double inertia_min = 0.4;
  double inertia_max = 0.9;
  double velocity_limit = 6.0;
  double dls_sigma_cells = 3.0;
  std::size_t resample_cap = 10;
};

struct HybridParams {
  std::size_t tile_buoys = 4;  // N_s
  double sample_radius = 50.0;
  std::size_t samples = 8;
  std::size_t radius_retries = 3;         // extra rings, each 25 % wider
  double simplex_edge = 25.0;             // m, refinement of each sub-layout buoy
  std::size_t simplex_iterations = 50;
  std::size_t surrogate_cap = 150;        // evaluations spent on the sub-layout
  double surrogate_fraction = 0.1;        // ... or this share of the budget if smaller
  double stage1_threshold = 1e-3;         // 0.1 %
  double stage2_threshold = 1e-5;         // 0.001 %
  std::size_t window = 5;
  bool rotation = true;
};

struct OptimizerParams {
  EAParams ea;
  LsNmParams ls_nm;
  ClsParams cls;
  DiscreteParams discrete;
  HybridParams hybrid;
};

}  // namespace wecfarm
