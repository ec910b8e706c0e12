#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "wecfarm/climate.hpp"
#include "wecfarm/evaluator.hpp"
#include "wecfarm/farm.hpp"
#include "wecfarm/hydro.hpp"
#include "wecfarm/objective.hpp"
#include "wecfarm/random.hpp"

namespace testing {

using namespace wecfarm;

// Two sea states, narrow spreading, equal occurrence.
inline WaveClimate two_state_climate() {
  WaveClimate c;
  c.name = "two_state";
  c.grid = SpectralGrid::uniform();
  c.states.push_back(build_spectrum(2.0, 9.0, 0.0, 25.0, c.grid));
  c.states.push_back(build_spectrum(3.0, 12.0, 0.0, 25.0, c.grid));
  c.occurrence = {0.5, 0.5};
  return c;
}

inline std::shared_ptr<const FarmEvaluator> make_evaluator(const WaveClimate& climate) {
  return std::make_shared<const FarmEvaluator>(default_hydro_model(climate), climate);
}

inline std::shared_ptr<const FarmEvaluator> perth_evaluator() {
  static const auto ev = make_evaluator(synthetic_climate(Site::perth_like));
  return ev;
}

inline std::shared_ptr<const FarmEvaluator> two_state_evaluator() {
  static const auto ev = make_evaluator(two_state_climate());
  return ev;
}

inline std::vector<Point> random_points(std::size_t n, double side, Rng& rng) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({uniform(rng, 0.0, side), uniform(rng, 0.0, side)});
  return pts;
}

// Cheap analytic stand-in: minus the summed squared distance from the farm
// centre (maximised at the centre).
inline Problem centre_problem(std::size_t buoys, bool spacing = true) {
  Problem p;
  p.buoys = buoys;
  p.side = farm_side(buoys);
  p.enforce_spacing = spacing;
  const double c = p.side / 2.0;
  p.power = [c](std::span<const Point> pts) {
    double s = 0.0;
    for (const auto& q : pts) s += (q.x - c) * (q.x - c) + (q.y - c) * (q.y - c);
    return -s;
  };
  return p;
}

inline bool non_decreasing(const RunRecord& r) {
  for (std::size_t i = 1; i < r.curve.size(); ++i) {
    if (r.curve[i].best < r.curve[i - 1].best) return false;
  }
  return true;
}

}  // namespace testing
