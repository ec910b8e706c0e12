#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wecfarm/objective.hpp"
#include "wecfarm/params.hpp"
#include "wecfarm/random.hpp"

namespace wecfarm {

// Square grid of candidate positions; cell (i, j) sits at (i s, j s).
struct GridSpec {
  double side = 0.0;
  double spacing = 50.0;
  std::size_t per_side = 0;

  static GridSpec for_farm(double side, double spacing = 50.0);
  std::size_t cells() const noexcept { return per_side * per_side; }
  std::size_t cell(std::size_t i, std::size_t j) const noexcept { return i * per_side + j; }
  Point position(std::size_t cell) const;
};

using Genome = std::vector<std::uint8_t>;

std::size_t popcount(const Genome& genome);
// Throws Error(invalid_layout) when a position is not on the grid or two
// buoys share a cell.
Genome encode(const Layout& layout, const GridSpec& grid);
Layout decode(const Genome& genome, const GridSpec& grid);
std::string to_bitstring(const Genome& genome);

Genome random_genome(std::size_t length, std::size_t ones, Rng& rng);
// Flips uniformly chosen surplus ones (or missing zeros) until popcount == ones.
void correct_popcount(Genome& genome, std::size_t ones, Rng& rng);

// Two-point crossover: swaps the segment [a, b) between the children.
void two_point_crossover(Genome& a, Genome& b, Rng& rng);
// Moves each one to a random zero with probability `rate`; popcount unchanged.
void move_mutation(Genome& genome, double rate, Rng& rng);

Genome bde_mutant(const Genome& r1, const Genome& r2, const Genome& gbest);
// Takes the mutant's bit with probability pcr and always at one random index.
Genome binomial_crossover(const Genome& parent, const Genome& mutant, double pcr, Rng& rng);

// V-shaped transfer |(2/pi) atan((pi/2) v)|.
double bpso_transfer(double v);
// Complements bit k when a uniform draw falls below T(v_k).
void bpso_flip(Genome& genome, std::span<const double> velocity, Rng& rng);
double pso_inertia(std::size_t iteration, std::size_t iterations, const DiscreteParams& params);

// A population of genomes. `payload` rides along with each genome (the hybrid
// keeps tile rotations there) and is inherited from the parent a child replaces.
struct Population {
  std::size_t ones = 0;
  std::vector<Genome> genomes;
  std::vector<std::vector<std::uint8_t>> payload;
  std::vector<double> fitness;

  std::size_t best_index() const;
};

using GenomeFitness = std::function<double(const Genome&, std::span<const std::uint8_t>)>;

struct PsoState {
  std::vector<std::vector<double>> velocity;
  std::vector<Genome> personal_best;
  std::vector<double> personal_fitness;
  Genome global_best;
  double global_fitness = 0.0;
  std::size_t iteration = 0;
  std::size_t iterations = 1;  // schedule length

  static PsoState start(const Population& population, std::size_t iterations);
};

void bga_step(Population& population, const DiscreteParams& params, const GenomeFitness& fitness,
              Rng& rng);
void bde_step(Population& population, const EAParams& params, const GenomeFitness& fitness,
              Rng& rng);
void bpso_step(PsoState& state, Population& population, const DiscreteParams& params,
               const GenomeFitness& fitness, Rng& rng);

enum class BinaryVariant { bga, bde, bpso };
enum class DlsVariant { one_cell, normal_cells };

// Runs one binary-optimizer generation of `variant` on `population`.
class BinaryEngine {
 public:
  BinaryEngine(BinaryVariant variant, const OptimizerParams& params, std::size_t iterations);
  void step(Population& population, const GenomeFitness& fitness, Rng& rng);

 private:
  BinaryVariant variant_;
  const OptimizerParams& params_;
  std::size_t iterations_;
  bool started_ = false;
  PsoState pso_;
};

RunRecord binary_run(const Problem& problem, const Budget& budget, const OptimizerParams& params,
                     Rng& rng, BinaryVariant variant);

// One elitist local-search move set on a layout: each buoy moves with
// probability 1/N (at least one) by whole grid steps; moves off the farm or
// within 50 m of another buoy are redrawn up to the resample cap, then skipped.
Layout dls_move(const Layout& layout, double step, DlsVariant variant, double probability,
                const DiscreteParams& params, Rng& rng);

// Elitist search from `start`. After every `generation` evaluations
// `keep_going()` decides whether to continue.
void dls_search(Objective& objective, Layout start, double start_value, DlsVariant variant,
                const DiscreteParams& params, Rng& rng, std::size_t generation,
                const std::function<bool()>& keep_going);

RunRecord dls(const Problem& problem, const Budget& budget, const OptimizerParams& params,
              Rng& rng, DlsVariant variant);

}  // namespace wecfarm
