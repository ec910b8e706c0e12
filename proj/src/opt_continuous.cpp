#include "wecfarm/opt_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wecfarm/error.hpp"
#include "wecfarm/farm.hpp"
#include "wecfarm/simplex.hpp"

namespace wecfarm {

namespace {

constexpr double kLost = -std::numeric_limits<double>::infinity();

std::vector<double> flatten(const Layout& layout) {
  std::vector<double> v;
  v.reserve(2 * layout.size());
  for (const auto& p : layout.positions) {
    v.push_back(p.x);
    v.push_back(p.y);
  }
  return v;
}

Layout unflatten(std::span<const double> v, double side) {
  Layout layout{side, {}};
  layout.positions.reserve(v.size() / 2);
  for (std::size_t k = 0; k + 1 < v.size(); k += 2) layout.positions.push_back({v[k], v[k + 1]});
  return layout;
}

double mutation_probability(const OptimizerParams& params, std::size_t buoys) {
  return params.ea.mutation_probability.value_or(1.0 / static_cast<double>(buoys));
}

void require_buoys(const Problem& problem) {
  problem.validate();
  if (problem.buoys == 0) throw Error(ErrorCode::invalid_argument, "optimizers need at least one buoy");
}

bool clear_of(const Point& p, std::span<const Point> placed, double min_distance) {
  return std::all_of(placed.begin(), placed.end(),
                     [&](const Point& q) { return distance(p, q) >= min_distance; });
}

}  // namespace

double ide_scale(std::size_t generation, std::size_t max_generations, double scale0) {
  const double g = static_cast<double>(generation);
  const double gm = static_cast<double>(max_generations);
  if (generation < 1 || generation > max_generations) {
    throw Error(ErrorCode::invalid_argument, "generation outside 1..max_generations");
  }
  return scale0 * std::pow(2.0, std::exp(1.0 - gm / (gm + 1.0 - g)));
}

Layout random_layout(const Problem& problem, Rng& rng) {
  if (problem.enforce_spacing) return random_feasible_layout(problem.buoys, problem.side, rng);
  Layout layout{problem.side, {}};
  for (std::size_t i = 0; i < problem.buoys; ++i) {
    layout.positions.push_back({uniform(rng, 0.0, problem.side), uniform(rng, 0.0, problem.side)});
  }
  return layout;
}

Layout mutate_buoys(const Layout& layout, double sigma, double p, Rng& rng) {
  Layout child = layout;
  if (child.empty()) return child;
  bool any = false;
  for (auto& q : child.positions) {
    if (uniform01(rng) < p) {
      q.x += normal(rng, sigma);
      q.y += normal(rng, sigma);
      any = true;
    }
  }
  if (!any && p > 0.0) {
    auto& q = child.positions[pick(rng, child.size())];
    q.x += normal(rng, sigma);
    q.y += normal(rng, sigma);
  }
  return clamp_to_farm(std::move(child));
}

bool make_feasible(const Problem& problem, Layout& layout, Rng& rng) {
  layout = clamp_to_farm(std::move(layout));
  if (!problem.enforce_spacing) return true;
  auto fixed = repair(layout, rng);
  layout = std::move(fixed.layout);
  return fixed.repaired;
}

RunRecord one_plus_one_ea(const Problem& problem, const Budget& budget,
                          const OptimizerParams& params, Rng& rng) {
  require_buoys(problem);
  budget.validate(1);
  RunRecord record;
  Objective objective(problem, budget.max_evaluations, record);
  objective.set_stage(Stage::init);
  Layout parent = random_layout(problem, rng);
  double parent_value = objective.evaluate(parent);

  objective.set_stage(Stage::search);
  const double sigma = params.ea.sigma_fraction * problem.side;
  const double p = mutation_probability(params, problem.buoys);
  while (!objective.exhausted()) {
    Layout child = mutate_buoys(parent, sigma, p, rng);
    if (!make_feasible(problem, child, rng)) {
      ++record.skipped;
      objective.log("repair failed for a 1+1EA child");
      continue;
    }
    const double value = objective.evaluate(child);
    if (value >= parent_value) {
      parent = std::move(child);
      parent_value = value;
    }
  }
  return record;
}

RunRecord differential_evolution(const Problem& problem, const Budget& budget,
                                 const OptimizerParams& params, Rng& rng, DeVariant variant) {
  require_buoys(problem);
  const std::size_t lambda = params.ea.population;
  const std::size_t partners = variant == DeVariant::rand1bin ? 3 : 2;
  if (lambda < partners + 1) {
    throw Error(ErrorCode::invalid_params, "DE needs a population of at least " +
                                               std::to_string(partners + 1));
  }
  if (!(params.ea.crossover >= 0.0 && params.ea.crossover <= 1.0)) {
    throw Error(ErrorCode::invalid_params, "crossover probability outside [0, 1]");
  }
  budget.validate(lambda);

  RunRecord record;
  Objective objective(problem, budget.max_evaluations, record);
  objective.set_stage(Stage::init);
  std::vector<std::vector<double>> population;
  std::vector<double> fitness;
  for (std::size_t i = 0; i < lambda; ++i) {
    const Layout layout = random_layout(problem, rng);
    fitness.push_back(objective.evaluate(layout));
    population.push_back(flatten(layout));
  }

  objective.set_stage(Stage::search);
  const std::size_t dims = population.front().size();
  const std::size_t max_generations =
      std::max<std::size_t>(1, (budget.max_evaluations - lambda) / lambda);
  ImprovementTracker tracker;
  tracker.push(objective.best());
  for (std::size_t generation = 1; !objective.exhausted(); ++generation) {
    double scale = params.ea.scale;
    if (variant == DeVariant::best1bin_adaptive) {
      scale = ide_scale(std::min(generation, max_generations), max_generations, params.ea.scale0);
    }
    const std::size_t best =
        static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
    for (std::size_t i = 0; i < lambda && !objective.exhausted(); ++i) {
      std::size_t r[3] = {i, i, i};
      for (std::size_t k = 0; k < partners; ++k) {
        do {
          r[k] = pick(rng, lambda);
        } while (r[k] == i || (k > 0 && r[k] == r[0]) || (k > 1 && r[k] == r[1]));
      }
      std::vector<double> trial = population[i];
      const std::size_t j_rand = pick(rng, dims);
      for (std::size_t j = 0; j < dims; ++j) {
        if (j != j_rand && !(uniform01(rng) < params.ea.crossover)) continue;
        if (variant == DeVariant::rand1bin) {
          trial[j] = population[r[0]][j] + scale * (population[r[1]][j] - population[r[2]][j]);
        } else {
          trial[j] = population[best][j] + scale * (population[r[0]][j] - population[r[1]][j]);
        }
      }
      Layout layout = unflatten(trial, problem.side);
      if (!make_feasible(problem, layout, rng)) {
        ++record.skipped;
        objective.log("repair failed for a DE trial");
        continue;
      }
      const double value = objective.evaluate(layout);
      if (value >= fitness[i]) {
        fitness[i] = value;
        population[i] = flatten(layout);
      }
    }
    tracker.push(objective.best());
    objective.log_generation(tracker.rate());
  }
  return record;
}

RunRecord ls_nm(const Problem& problem, const Budget& budget, const OptimizerParams& params,
                Rng& rng) {
  require_buoys(problem);
  budget.validate(1);
  RunRecord record;
  Objective objective(problem, budget.max_evaluations, record);
  objective.set_stage(Stage::search);
  const std::size_t n = problem.buoys;
  const double min_distance = problem.enforce_spacing ? kSafetyDistance : 0.0;
  const auto& cfg = params.ls_nm;

  Layout layout{problem.side, {}};
  for (std::size_t k = 0; k < n; ++k) {
    const bool full = k + 1 == n;
    const std::size_t reserve = full ? 0 : 1;
    if (objective.remaining() <= reserve) break;
    const std::size_t share = std::max<std::size_t>(1, (objective.remaining() - reserve) / (n - k));
    const std::size_t start = objective.used();

    auto value_with = [&](const Point& p) {
      Layout trial = layout;
      trial.positions.push_back(p);
      return full ? objective.evaluate(trial) : objective.evaluate_partial(trial.positions);
    };

    Point best_point{};
    double best_value = kLost;
    bool found = false;
    for (std::size_t s = 0; s < cfg.samples && objective.used() - start < share; ++s) {
      Point candidate{};
      bool clear = false;
      for (int attempt = 0; attempt < 20 && !clear; ++attempt) {
        if (k == 0) {
          candidate = {uniform(rng, 0.0, problem.side), uniform(rng, 0.0, problem.side)};
        } else {
          const Point& anchor = layout.positions.back();
          candidate = {std::clamp(anchor.x + normal(rng, cfg.sigma), 0.0, problem.side),
                       std::clamp(anchor.y + normal(rng, cfg.sigma), 0.0, problem.side)};
        }
        clear = clear_of(candidate, layout.positions, min_distance);
      }
      if (!clear) continue;
      const double value = value_with(candidate);
      if (!found || value > best_value) {
        best_point = candidate;
        best_value = value;
        found = true;
      }
    }
    if (!found) break;

    const std::size_t spent = objective.used() - start;
    if (spent < share) {
      SimplexConfig simplex;
      simplex.initial_edge = cfg.initial_edge;
      simplex.max_iters = cfg.simplex_iterations;
      simplex.max_evaluations = share - spent;
      auto f = [&](std::span<const double> v) {
        const Point p{v[0], v[1]};
        if (!clear_of(p, layout.positions, min_distance)) return std::numeric_limits<double>::infinity();
        return -value_with(p);
      };
      // The start point is already known; the minimiser re-evaluates it, which
      // keeps its accounting simple at the cost of one call.
      const auto result = minimize(f, {best_point.x, best_point.y},
                                   Box::uniform(2, 0.0, problem.side), simplex, rng);
      if (-result.f >= best_value) best_point = {result.x[0], result.x[1]};
    }
    layout.positions.push_back(best_point);
  }

  if (layout.size() < n) {
    objective.log("budget ran out after " + std::to_string(layout.size()) +
                  " LS-NM placements; remaining buoys grid-filled");
    const double step = std::max(min_distance, kSafetyDistance);
    const auto cells = static_cast<std::size_t>(std::floor(problem.side / step + 1e-9)) + 1;
    for (std::size_t c = 0; c < cells * cells && layout.size() < n; ++c) {
      const Point p{static_cast<double>(c % cells) * step, static_cast<double>(c / cells) * step};
      if (clear_of(p, layout.positions, min_distance)) layout.positions.push_back(p);
    }
    if (layout.size() < n) throw Error(ErrorCode::invalid_layout, "grid fill could not place every buoy");
    objective.evaluate(layout);
  }
  return record;
}

double cls_sigma(std::size_t step, std::size_t steps, const ClsParams& params) {
  if (steps <= 1) return params.sigma_start;
  const double t = static_cast<double>(std::min(step, steps - 1)) / static_cast<double>(steps - 1);
  return params.sigma_start + (params.sigma_end - params.sigma_start) * t;
}

void cls_search(Objective& objective, Layout start, double start_value, std::size_t evaluations,
                const ClsParams& params, Rng& rng) {
  const Problem& problem = objective.problem();
  const double p = 1.0 / static_cast<double>(std::max<std::size_t>(1, start.size()));
  const std::size_t first = objective.used();
  const std::size_t max_attempts = 10 * evaluations + 10;
  Layout current = std::move(start);
  double current_value = start_value;
  for (std::size_t attempt = 0; attempt < max_attempts && !objective.exhausted(); ++attempt) {
    const std::size_t step = objective.used() - first;
    if (step >= evaluations) break;
    Layout child = mutate_buoys(current, cls_sigma(step, evaluations, params), p, rng);
    if (!make_feasible(problem, child, rng)) continue;
    const double value = objective.evaluate(child);
    if (value >= current_value) {
      current = std::move(child);
      current_value = value;
    }
  }
}

RunRecord cls(const Problem& problem, const Layout& start, const Budget& budget,
              const OptimizerParams& params, Rng& rng) {
  require_buoys(problem);
  budget.validate(1);
  RunRecord record;
  Objective objective(problem, budget.max_evaluations, record);
  objective.set_stage(Stage::init);
  const double value = objective.evaluate(start);
  if (value == kLost) throw Error(ErrorCode::invalid_start, "CLS start layout is infeasible");
  objective.set_stage(Stage::cls);
  cls_search(objective, start, value, objective.remaining(), params.cls, rng);
  return record;
}

}  // namespace wecfarm
