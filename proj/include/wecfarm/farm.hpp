#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wecfarm/layout.hpp"
#include "wecfarm/random.hpp"
#include "wecfarm/simplex.hpp"

namespace wecfarm {

inline constexpr double kSafetyDistance = 50.0;    // m
inline constexpr double kAreaPerBuoy = 20000.0;    // m^2
// Repair aims this far past the safety distance so rounding cannot undo it.
inline constexpr double kRepairMargin = 1e-6;      // m

// Side of the square farm for n buoys.
double farm_side(std::size_t buoys);

struct ViolatingPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double shortfall = 0.0;  // 50 - distance
};

struct ViolationReport {
  double sum_dist = 0.0;
  std::vector<ViolatingPair> violating_pairs;

  bool feasible() const noexcept { return violating_pairs.empty(); }
  std::string to_json() const;
};

ViolationReport measure_violations(std::span<const Point> positions);
// Total shortfall only; same value as measure_violations(...).sum_dist.
double violation_sum(std::span<const Point> positions, double min_distance = kSafetyDistance);

// (sum_dist + 1)^20
double penalty(double sum_dist);

Layout clamp_to_farm(Layout layout);
bool in_bounds(const Layout& layout);
// In bounds and every pairwise distance >= 50 m.
bool is_feasible(const Layout& layout);

struct RepairOptions {
  double initial_edge = 10.0;
  std::size_t iterations_per_dim = 200;
  std::size_t max_rounds = 3;
  double jitter = 0.1;
};

struct RepairResult {
  Layout layout;
  bool repaired = false;  // false: the caller must reject the layout
  std::size_t rounds = 0;
  ViolationReport remaining;
};

// Moves only the buoys that take part in a violation, minimising the penalty
// with Nelder-Mead. Never touches the power model.
RepairResult repair(const Layout& layout, Rng& rng, const RepairOptions& options = {});

// Uniformly random positions in the farm followed by repair; retries until a
// feasible layout comes out.
Layout random_feasible_layout(std::size_t buoys, double side, Rng& rng);

}  // namespace wecfarm
