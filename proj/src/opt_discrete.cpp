#include "wecfarm/opt_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "wecfarm/error.hpp"
#include "wecfarm/farm.hpp"

namespace wecfarm {

GridSpec GridSpec::for_farm(double side, double spacing) {
  if (!(spacing >= kSafetyDistance)) {
    throw Error(ErrorCode::invalid_params, "grid spacing below the 50 m safety distance");
  }
  if (!(side > 0.0)) throw Error(ErrorCode::invalid_layout, "farm side must be positive");
  GridSpec grid;
  grid.side = side;
  grid.spacing = spacing;
  grid.per_side = static_cast<std::size_t>(std::floor(side / spacing + 1e-9)) + 1;
  return grid;
}

Point GridSpec::position(std::size_t cell) const {
  return {static_cast<double>(cell / per_side) * spacing,
          static_cast<double>(cell % per_side) * spacing};
}

std::size_t popcount(const Genome& genome) {
  return static_cast<std::size_t>(std::count(genome.begin(), genome.end(), std::uint8_t{1}));
}

Genome encode(const Layout& layout, const GridSpec& grid) {
  Genome genome(grid.cells(), 0);
  for (const auto& p : layout.positions) {
    const double fi = std::round(p.x / grid.spacing);
    const double fj = std::round(p.y / grid.spacing);
    const double tol = 1e-9 * std::max(1.0, grid.spacing);
    if (std::abs(p.x - fi * grid.spacing) > tol || std::abs(p.y - fj * grid.spacing) > tol ||
        fi < 0.0 || fj < 0.0 || fi >= static_cast<double>(grid.per_side) ||
        fj >= static_cast<double>(grid.per_side)) {
      throw Error(ErrorCode::invalid_layout, "position is not on the placement grid");
    }
    auto& bit = genome[grid.cell(static_cast<std::size_t>(fi), static_cast<std::size_t>(fj))];
    if (bit) throw Error(ErrorCode::invalid_layout, "two buoys share a grid cell");
    bit = 1;
  }
  return genome;
}

Layout decode(const Genome& genome, const GridSpec& grid) {
  if (genome.size() != grid.cells()) {
    throw Error(ErrorCode::invalid_argument, "genome length does not match the grid");
  }
  Layout layout{grid.side, {}};
  for (std::size_t c = 0; c < genome.size(); ++c) {
    if (genome[c]) layout.positions.push_back(grid.position(c));
  }
  return layout;
}

std::string to_bitstring(const Genome& genome) {
  std::string s(genome.size(), '0');
  for (std::size_t k = 0; k < genome.size(); ++k) {
    if (genome[k]) s[k] = '1';
  }
  return s;
}

Genome random_genome(std::size_t length, std::size_t ones, Rng& rng) {
  if (ones > length) {
    throw Error(ErrorCode::invalid_argument, "cannot place " + std::to_string(ones) + " buoys in " +
                                                 std::to_string(length) + " cells");
  }
  Genome genome(length, 0);
  std::fill(genome.begin(), genome.begin() + static_cast<std::ptrdiff_t>(ones), std::uint8_t{1});
  std::shuffle(genome.begin(), genome.end(), rng);
  return genome;
}

void correct_popcount(Genome& genome, std::size_t ones, Rng& rng) {
  if (ones > genome.size()) throw Error(ErrorCode::invalid_argument, "popcount target exceeds length");
  std::size_t count = popcount(genome);
  if (count == ones) return;
  const std::uint8_t from = count > ones ? 1 : 0;
  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < genome.size(); ++k) {
    if (genome[k] == from) candidates.push_back(k);
  }
  std::size_t flips = count > ones ? count - ones : ones - count;
  while (flips-- > 0) {
    const std::size_t pos = pick(rng, candidates.size());
    genome[candidates[pos]] = 1 - from;
    candidates[pos] = candidates.back();
    candidates.pop_back();
  }
}

void two_point_crossover(Genome& a, Genome& b, Rng& rng) {
  if (a.size() != b.size()) throw Error(ErrorCode::invalid_argument, "crossover of unequal genomes");
  std::size_t lo = pick(rng, a.size() + 1);
  std::size_t hi = pick(rng, a.size() + 1);
  if (lo > hi) std::swap(lo, hi);
  std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(lo), a.begin() + static_cast<std::ptrdiff_t>(hi),
                   b.begin() + static_cast<std::ptrdiff_t>(lo));
}

void move_mutation(Genome& genome, double rate, Rng& rng) {
  std::vector<std::size_t> ones, zeros;
  for (std::size_t k = 0; k < genome.size(); ++k) (genome[k] ? ones : zeros).push_back(k);
  for (auto one : ones) {
    if (zeros.empty() || !(uniform01(rng) < rate)) continue;
    const std::size_t z = pick(rng, zeros.size());
    genome[one] = 0;
    genome[zeros[z]] = 1;
    zeros[z] = one;
  }
}

Genome bde_mutant(const Genome& r1, const Genome& r2, const Genome& gbest) {
  if (r1.size() != r2.size() || r1.size() != gbest.size()) {
    throw Error(ErrorCode::invalid_argument, "mutant of unequal genomes");
  }
  Genome mutant(r1.size());
  for (std::size_t j = 0; j < r1.size(); ++j) {
    const std::uint8_t diff = r1[j] == r2[j] ? 0 : r1[j];
    mutant[j] = diff == 1 ? 1 : gbest[j];
  }
  return mutant;
}

Genome binomial_crossover(const Genome& parent, const Genome& mutant, double pcr, Rng& rng) {
  Genome trial = parent;
  if (trial.empty()) return trial;
  const std::size_t j_rand = pick(rng, trial.size());
  for (std::size_t j = 0; j < trial.size(); ++j) {
    if (j == j_rand || uniform01(rng) < pcr) trial[j] = mutant[j];
  }
  return trial;
}

double bpso_transfer(double v) {
  return std::abs(2.0 / std::numbers::pi * std::atan(std::numbers::pi / 2.0 * v));
}

void bpso_flip(Genome& genome, std::span<const double> velocity, Rng& rng) {
  for (std::size_t k = 0; k < genome.size(); ++k) {
    if (uniform01(rng) < bpso_transfer(velocity[k])) genome[k] = 1 - genome[k];
  }
}

double pso_inertia(std::size_t iteration, std::size_t iterations, const DiscreteParams& params) {
  const double t = iterations <= 1 ? 0.0
                                   : static_cast<double>(std::min(iteration, iterations - 1)) /
                                         static_cast<double>(iterations - 1);
  double w = params.inertia_start + (params.inertia_end - params.inertia_start) * t;
  if (params.inertia_clamp) w = std::clamp(w, params.inertia_min, params.inertia_max);
  return w;
}

std::size_t Population::best_index() const {
  return static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
}

PsoState PsoState::start(const Population& population, std::size_t iterations) {
  PsoState s;
  s.velocity.assign(population.genomes.size(),
                    std::vector<double>(population.genomes.empty() ? 0 : population.genomes[0].size(), 0.0));
  s.personal_best = population.genomes;
  s.personal_fitness = population.fitness;
  const std::size_t best = population.best_index();
  s.global_best = population.genomes[best];
  s.global_fitness = population.fitness[best];
  s.iterations = std::max<std::size_t>(1, iterations);
  return s;
}

namespace {

std::size_t tournament(const Population& population, Rng& rng) {
  const std::size_t a = pick(rng, population.genomes.size());
  const std::size_t b = pick(rng, population.genomes.size());
  return population.fitness[b] > population.fitness[a] ? b : a;
}

std::span<const std::uint8_t> payload_of(const Population& population, std::size_t i) {
  if (i < population.payload.size()) return population.payload[i];
  return {};
}

}  // namespace

void bga_step(Population& population, const DiscreteParams& params, const GenomeFitness& fitness,
              Rng& rng) {
  const std::size_t n = population.genomes.size();
  if (n == 0) return;
  const bool carry = !population.payload.empty();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return population.fitness[a] > population.fitness[b];
  });
  const auto elites = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::floor(params.elite_fraction * static_cast<double>(n) + 0.5)), 1, n);

  Population next;
  next.ones = population.ones;
  for (std::size_t e = 0; e < elites; ++e) {
    next.genomes.push_back(population.genomes[order[e]]);
    if (carry) next.payload.push_back(population.payload[order[e]]);
    next.fitness.push_back(population.fitness[order[e]]);
  }
  while (next.genomes.size() < n) {
    const std::size_t pa = tournament(population, rng);
    const std::size_t pb = tournament(population, rng);
    Genome a = population.genomes[pa];
    Genome b = population.genomes[pb];
    if (uniform01(rng) < params.crossover_rate) two_point_crossover(a, b, rng);
    for (auto* child : {&a, &b}) {
      move_mutation(*child, params.mutation_rate, rng);
      correct_popcount(*child, population.ones, rng);
    }
    const std::size_t parents[2] = {pa, pb};
    Genome* children[2] = {&a, &b};
    for (int c = 0; c < 2 && next.genomes.size() < n; ++c) {
      const auto payload = payload_of(population, parents[c]);
      next.fitness.push_back(fitness(*children[c], payload));
      next.genomes.push_back(std::move(*children[c]));
      if (carry) next.payload.emplace_back(payload.begin(), payload.end());
    }
  }
  population = std::move(next);
}

void bde_step(Population& population, const EAParams& params, const GenomeFitness& fitness,
              Rng& rng) {
  const std::size_t n = population.genomes.size();
  if (n < 3) throw Error(ErrorCode::invalid_params, "binary DE needs a population of at least 3");
  const Genome gbest = population.genomes[population.best_index()];
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r1, r2;
    do {
      r1 = pick(rng, n);
    } while (r1 == i);
    do {
      r2 = pick(rng, n);
    } while (r2 == i || r2 == r1);
    const Genome mutant = bde_mutant(population.genomes[r1], population.genomes[r2], gbest);
    Genome trial = binomial_crossover(population.genomes[i], mutant, params.crossover, rng);
    correct_popcount(trial, population.ones, rng);
    const double value = fitness(trial, payload_of(population, i));
    if (value >= population.fitness[i]) {
      population.genomes[i] = std::move(trial);
      population.fitness[i] = value;
    }
  }
}

void bpso_step(PsoState& state, Population& population, const DiscreteParams& params,
               const GenomeFitness& fitness, Rng& rng) {
  const double w = pso_inertia(state.iteration, state.iterations, params);
  for (std::size_t i = 0; i < population.genomes.size(); ++i) {
    Genome& x = population.genomes[i];
    auto& v = state.velocity[i];
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double r1 = uniform01(rng);
      const double r2 = uniform01(rng);
      const double xk = x[k];
      v[k] = w * v[k] + params.c1 * r1 * (state.personal_best[i][k] - xk) +
             params.c2 * r2 * (state.global_best[k] - xk);
      v[k] = std::clamp(v[k], -params.velocity_limit, params.velocity_limit);
    }
    bpso_flip(x, v, rng);
    correct_popcount(x, population.ones, rng);
    const double value = fitness(x, payload_of(population, i));
    population.fitness[i] = value;
    if (value > state.personal_fitness[i]) {
      state.personal_fitness[i] = value;
      state.personal_best[i] = x;
    }
    if (value > state.global_fitness) {
      state.global_fitness = value;
      state.global_best = x;
    }
  }
  ++state.iteration;
}

BinaryEngine::BinaryEngine(BinaryVariant variant, const OptimizerParams& params,
                           std::size_t iterations)
    : variant_(variant), params_(params), iterations_(iterations) {}

void BinaryEngine::step(Population& population, const GenomeFitness& fitness, Rng& rng) {
  switch (variant_) {
    case BinaryVariant::bga: bga_step(population, params_.discrete, fitness, rng); break;
    case BinaryVariant::bde: bde_step(population, params_.ea, fitness, rng); break;
    case BinaryVariant::bpso:
      if (!started_) {
        pso_ = PsoState::start(population, iterations_);
        started_ = true;
      }
      bpso_step(pso_, population, params_.discrete, fitness, rng);
      break;
  }
}

RunRecord binary_run(const Problem& problem, const Budget& budget, const OptimizerParams& params,
                     Rng& rng, BinaryVariant variant) {
  problem.validate();
  const std::size_t lambda = params.ea.population;
  if (lambda < 3) throw Error(ErrorCode::invalid_params, "binary optimizers need a population of at least 3");
  budget.validate(lambda);
  const GridSpec grid = GridSpec::for_farm(problem.side, params.discrete.spacing);

  RunRecord record;
  Objective objective(problem, budget.max_evaluations, record);
  const GenomeFitness fitness = [&](const Genome& g, std::span<const std::uint8_t>) {
    return objective.evaluate(decode(g, grid));
  };

  objective.set_stage(Stage::init);
  Population population;
  population.ones = problem.buoys;
  for (std::size_t i = 0; i < lambda; ++i) {
    population.genomes.push_back(random_genome(grid.cells(), problem.buoys, rng));
    population.fitness.push_back(fitness(population.genomes.back(), {}));
  }

  objective.set_stage(Stage::search);
  BinaryEngine engine(variant, params, std::max<std::size_t>(1, (budget.max_evaluations - lambda) / lambda));
  ImprovementTracker tracker;
  tracker.push(objective.best());
  while (!objective.exhausted()) {
    engine.step(population, fitness, rng);
    tracker.push(objective.best());
    objective.log_generation(tracker.rate());
  }
  return record;
}

Layout dls_move(const Layout& layout, double step, DlsVariant variant, double probability,
                const DiscreteParams& params, Rng& rng) {
  static constexpr int kNeighbours[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                            {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  Layout child = layout;
  const std::size_t n = child.size();
  if (n == 0) return child;
  std::vector<std::size_t> movers;
  for (std::size_t b = 0; b < n; ++b) {
    if (uniform01(rng) < probability) movers.push_back(b);
  }
  if (movers.empty() && probability > 0.0) movers.push_back(pick(rng, n));

  for (auto b : movers) {
    for (std::size_t attempt = 0; attempt < params.resample_cap; ++attempt) {
      double dx = 0.0, dy = 0.0;
      if (variant == DlsVariant::one_cell) {
        const auto& d = kNeighbours[pick(rng, 8)];
        dx = d[0];
        dy = d[1];
      } else {
        dx = std::round(normal(rng, params.dls_sigma_cells));
        dy = std::round(normal(rng, params.dls_sigma_cells));
        if (dx == 0.0 && dy == 0.0) continue;
      }
      const Point target{child.positions[b].x + dx * step, child.positions[b].y + dy * step};
      if (target.x < 0.0 || target.x > child.side || target.y < 0.0 || target.y > child.side) continue;
      bool clear = true;
      for (std::size_t o = 0; o < n && clear; ++o) {
        clear = o == b || distance(target, child.positions[o]) >= kSafetyDistance;
      }
      if (!clear) continue;
      child.positions[b] = target;
      break;
    }
  }
  return child;
}

void dls_search(Objective& objective, Layout start, double start_value, DlsVariant variant,
                const DiscreteParams& params, Rng& rng, std::size_t generation,
                const std::function<bool()>& keep_going) {
  const double p = 1.0 / static_cast<double>(std::max<std::size_t>(1, start.size()));
  generation = std::max<std::size_t>(1, generation);
  Layout current = std::move(start);
  double current_value = start_value;
  std::size_t since = 0;
  std::size_t idle = 0;
  while (!objective.exhausted() && idle < 1000) {
    Layout child = dls_move(current, params.spacing, variant, p, params, rng);
    if (child == current) {
      ++idle;
      continue;
    }
    idle = 0;
    const double value = objective.evaluate(child);
    if (value >= current_value) {
      current = std::move(child);
      current_value = value;
    }
    if (++since == generation) {
      since = 0;
      if (!keep_going()) break;
    }
  }
}

RunRecord dls(const Problem& problem, const Budget& budget, const OptimizerParams& params,
              Rng& rng, DlsVariant variant) {
  problem.validate();
  const std::size_t lambda = params.ea.population;
  budget.validate(variant == DlsVariant::normal_cells ? lambda : 1);
  const GridSpec grid = GridSpec::for_farm(problem.side, params.discrete.spacing);

  RunRecord record;
  Objective objective(problem, budget.max_evaluations, record);
  objective.set_stage(Stage::init);
  const std::size_t starts = variant == DlsVariant::normal_cells ? lambda : 1;
  Layout start;
  double start_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < starts; ++i) {
    Layout candidate = decode(random_genome(grid.cells(), problem.buoys, rng), grid);
    const double value = objective.evaluate(candidate);
    if (i == 0 || value > start_value) {
      start = std::move(candidate);
      start_value = value;
    }
  }

  objective.set_stage(Stage::dls);
  ImprovementTracker tracker;
  tracker.push(objective.best());
  dls_search(objective, std::move(start), start_value, variant, params.discrete, rng, lambda, [&] {
    tracker.push(objective.best());
    objective.log_generation(tracker.rate());
    return true;
  });
  return record;
}

}  // namespace wecfarm
