#include "wecfarm/farm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "json.hpp"

#include "wecfarm/error.hpp"
#include "wecfarm/kernels.hpp"

namespace wecfarm {

double farm_side(std::size_t buoys) {
  return std::sqrt(static_cast<double>(buoys) * kAreaPerBuoy);
}

std::string ViolationReport::to_json() const {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : violating_pairs) pairs.push_back({p.i, p.j, p.shortfall});
  return nlohmann::json{{"sum_dist", sum_dist}, {"violating_pairs", pairs}}.dump();
}

ViolationReport measure_violations(std::span<const Point> positions) {
  ViolationReport report;
  const auto coords = split_coordinates(positions);
  const std::size_t n = positions.size();
  std::vector<double> dist(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t rest = n - i - 1;
    kernels::distances_from(coords.xs[i], coords.ys[i], std::span(coords.xs).subspan(i + 1),
                            std::span(coords.ys).subspan(i + 1), std::span(dist).first(rest));
    for (std::size_t k = 0; k < rest; ++k) {
      if (dist[k] < kSafetyDistance) {
        const double s = kSafetyDistance - dist[k];
        report.violating_pairs.push_back({i, i + 1 + k, s});
        report.sum_dist += s;
      }
    }
  }
  return report;
}

double violation_sum(std::span<const Point> positions, double min_distance) {
  const auto coords = split_coordinates(positions);
  return kernels::shortfall_sum(coords.xs, coords.ys, min_distance);
}

double penalty(double sum_dist) {
  if (!(sum_dist >= 0.0)) throw Error(ErrorCode::invalid_argument, "violation sum must be >= 0");
  return std::pow(sum_dist + 1.0, 20.0);
}

Layout clamp_to_farm(Layout layout) {
  for (auto& p : layout.positions) {
    p.x = std::clamp(p.x, 0.0, layout.side);
    p.y = std::clamp(p.y, 0.0, layout.side);
  }
  return layout;
}

bool in_bounds(const Layout& layout) {
  return std::all_of(layout.positions.begin(), layout.positions.end(), [&](const Point& p) {
    return p.x >= 0.0 && p.x <= layout.side && p.y >= 0.0 && p.y <= layout.side;
  });
}

bool is_feasible(const Layout& layout) {
  return all_finite(layout.positions) && in_bounds(layout) &&
         violation_sum(layout.positions) == 0.0;
}

namespace {

void jitter_coincident(Layout& layout, Rng& rng, double jitter) {
  for (std::size_t i = 0; i < layout.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.size(); ++j) {
      if (distance(layout.positions[i], layout.positions[j]) < 1e-9) {
        const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        layout.positions[j].x += jitter * std::cos(angle);
        layout.positions[j].y += jitter * std::sin(angle);
      }
    }
  }
  layout = clamp_to_farm(std::move(layout));
}

}  // namespace

RepairResult repair(const Layout& layout, Rng& rng, const RepairOptions& options) {
  if (!all_finite(layout.positions)) {
    throw Error(ErrorCode::invalid_layout, "layout has non-finite coordinates");
  }
  RepairResult result;
  result.layout = clamp_to_farm(layout);
  result.remaining = measure_violations(result.layout.positions);
  if (result.remaining.feasible()) {
    result.repaired = true;
    return result;
  }
  jitter_coincident(result.layout, rng, options.jitter);

  for (std::size_t round = 0; round < options.max_rounds; ++round) {
    if (violation_sum(result.layout.positions) == 0.0) break;
    ++result.rounds;

    // Pairs inside the margin count as violators here so the simplex target
    // (penalty exactly 1) leaves every pair strictly clear of 50 m.
    const double aim = kSafetyDistance + kRepairMargin;
    std::set<std::size_t> movers;
    for (std::size_t i = 0; i < result.layout.size(); ++i) {
      for (std::size_t j = i + 1; j < result.layout.size(); ++j) {
        if (distance(result.layout.positions[i], result.layout.positions[j]) < aim) {
          movers.insert(i);
          movers.insert(j);
        }
      }
    }
    const std::vector<std::size_t> free(movers.begin(), movers.end());
    std::vector<double> x0;
    for (auto b : free) {
      x0.push_back(result.layout.positions[b].x);
      x0.push_back(result.layout.positions[b].y);
    }

    Layout trial = result.layout;
    auto objective = [&](std::span<const double> v) {
      for (std::size_t k = 0; k < free.size(); ++k) {
        trial.positions[free[k]] = {v[2 * k], v[2 * k + 1]};
      }
      return penalty(violation_sum(trial.positions, aim));
    };
    SimplexConfig cfg;
    cfg.initial_edge = options.initial_edge;
    cfg.max_iters = options.iterations_per_dim * x0.size();
    cfg.target = 1.0;
    cfg.f_tolerance = 0.0;
    cfg.x_tolerance = 1e-9;
    const Box box = Box::uniform(x0.size(), 0.0, layout.side);
    const auto best = minimize(objective, x0, box, cfg, rng);
    for (std::size_t k = 0; k < free.size(); ++k) {
      result.layout.positions[free[k]] = {best.x[2 * k], best.x[2 * k + 1]};
    }
    result.layout = clamp_to_farm(std::move(result.layout));
  }
  result.remaining = measure_violations(result.layout.positions);
  result.repaired = result.remaining.feasible();
  return result;
}

Layout random_feasible_layout(std::size_t buoys, double side, Rng& rng) {
  if (!(side > 0.0)) throw Error(ErrorCode::invalid_layout, "farm side must be positive");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Layout layout{side, {}};
    layout.positions.reserve(buoys);
    for (std::size_t i = 0; i < buoys; ++i) {
      layout.positions.push_back({uniform(rng, 0.0, side), uniform(rng, 0.0, side)});
    }
    auto fixed = repair(layout, rng);
    if (fixed.repaired) return std::move(fixed.layout);
  }
  throw Error(ErrorCode::invalid_layout, "could not place " + std::to_string(buoys) +
                                             " buoys feasibly in a farm of side " +
                                             std::to_string(side));
}

}  // namespace wecfarm
