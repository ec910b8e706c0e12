#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "wecfarm/random.hpp"

namespace wecfarm {

struct SimplexConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_edge = 10.0;
  std::size_t max_iters = 1000;
  std::size_t max_evaluations = std::numeric_limits<std::size_t>::max();
  // Stop when f_worst - f_best <= f_tolerance * (1 + |f_best|) ...
  double f_tolerance = 1e-12;
  // ... or when every vertex is within x_tolerance of the best one (inf-norm).
  double x_tolerance = 1e-10;
  // Stop as soon as f_best <= target.
  std::optional<double> target;

  // Throws Error(invalid_params).
  void validate() const;
};

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box uniform(std::size_t dims, double lo, double hi);
  void clamp(std::span<double> x) const;
  bool contains(std::span<const double> x) const;
};

enum class SimplexStop { converged, target_reached, max_iterations, max_evaluations };

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  SimplexStop reason = SimplexStop::converged;
  std::vector<double> best_trace;  // best vertex value after each iteration
};

using SimplexObjective = std::function<double(std::span<const double>)>;

// Nelder-Mead minimisation inside a box. Trial points are clamped to the box
// before evaluation; non-finite values count as +inf. The random source only
// picks the initial edge directions, so equal seeds give equal trajectories.
// Error(invalid_start) when f(x0) is not finite.
SimplexResult minimize(const SimplexObjective& f, std::vector<double> x0, const Box& box,
                       const SimplexConfig& config, Rng& rng);

}  // namespace wecfarm
