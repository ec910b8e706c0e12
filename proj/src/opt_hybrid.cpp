#include "wecfarm/opt_hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wecfarm/error.hpp"
#include "wecfarm/farm.hpp"
#include "wecfarm/opt_continuous.hpp"
#include "wecfarm/simplex.hpp"

namespace wecfarm {

namespace {

constexpr double kLost = -std::numeric_limits<double>::infinity();

bool clear_of(const Point& p, std::span<const Point> placed, double min_distance) {
  return std::all_of(placed.begin(), placed.end(),
                     [&](const Point& q) { return distance(p, q) >= min_distance; });
}

}  // namespace

TileGrid TileGrid::for_farm(double farm_side, std::size_t tile_buoys) {
  if (tile_buoys == 0) throw Error(ErrorCode::invalid_params, "sub-layout needs at least one buoy");
  if (!(farm_side > 0.0)) throw Error(ErrorCode::invalid_layout, "farm side must be positive");
  TileGrid grid;
  grid.farm_side = farm_side;
  const double native = std::sqrt(static_cast<double>(tile_buoys) * kAreaPerBuoy);
  grid.per_side = static_cast<std::size_t>(std::floor(farm_side / native)) + 1;
  grid.tile_side = farm_side / static_cast<double>(grid.per_side);
  return grid;
}

Point TileGrid::origin(std::size_t tile) const {
  return {static_cast<double>(tile / per_side) * tile_side,
          static_cast<double>(tile % per_side) * tile_side};
}

double TileGrid::margin() const noexcept { return kSafetyDistance / 2.0 + kRepairMargin; }

bool TileGrid::fits(std::span<const Point> offsets) const {
  // Rotation about the centre can land an ulp outside; the margin's 1e-6
  // slack absorbs that.
  const double lo = margin() - 1e-9;
  const double hi = tile_side - margin() + 1e-9;
  return std::all_of(offsets.begin(), offsets.end(), [&](const Point& p) {
    return p.x >= lo && p.x <= hi && p.y >= lo && p.y <= hi;
  });
}

std::vector<Point> rotate_offsets(std::span<const Point> offsets, Point centre, int steps) {
  const int k = ((steps % 8) + 8) % 8;
  // Exact values for the right angles keep four quarter turns exact.
  static constexpr double h = std::numbers::sqrt2 / 2.0;
  static constexpr double cosines[8] = {1, h, 0, -h, -1, -h, 0, h};
  const double c = cosines[k];
  const double s = cosines[(k + 6) % 8];  // sin(k 45 deg)
  std::vector<Point> out;
  out.reserve(offsets.size());
  for (const auto& p : offsets) {
    const double dx = p.x - centre.x;
    const double dy = p.y - centre.y;
    // Clockwise: angle -theta.
    out.push_back({centre.x + c * dx + s * dy, centre.y - s * dx + c * dy});
  }
  return out;
}

SubLayout sls_nm_surrogate(Objective& objective, const TileGrid& grid, std::size_t tile_buoys,
                           const HybridParams& params, std::size_t evaluations, Rng& rng) {
  const double t = grid.tile_side;
  const double lo = grid.margin();
  const double hi = t - grid.margin();
  if (!(hi >= lo)) throw Error(ErrorCode::invalid_layout, "tile too small for any buoy");
  const Point centre{t / 2.0, t / 2.0};
  const double beta = objective.problem().dominant_direction;
  const double min_distance = kSafetyDistance + kRepairMargin;
  const std::size_t first_eval = objective.used();
  const std::size_t stop_at = first_eval + evaluations;

  SubLayout tile;
  tile.tile_side = t;
  if (tile_buoys == 1) {
    tile.offsets.push_back(centre);
  } else {
    // Up-wave midpoint of the margin box edge.
    const double c = std::cos(beta), s = std::sin(beta);
    const double reach = (t / 2.0 - lo) / std::max(std::abs(c), std::abs(s));
    tile.offsets.push_back({std::clamp(centre.x - reach * c, lo, hi),
                            std::clamp(centre.y - reach * s, lo, hi)});
  }
  double tile_power = kLost;

  auto power_with = [&](const Point& p) {
    std::vector<Point> pts = tile.offsets;
    pts.push_back(p);
    return objective.evaluate_partial(pts);
  };
  auto budget_left = [&] { return objective.used() < stop_at && !objective.exhausted(); };

  for (std::size_t k = 1; k < tile_buoys; ++k) {
    const std::size_t share = std::max<std::size_t>(
        1, (stop_at - std::min(stop_at, objective.used())) / (tile_buoys - k));
    const std::size_t start = objective.used();

    Point best{};
    double best_value = kLost;
    bool found = false;
    // Rings of radius r0, 1.25 r0, ... around the previous buoy, best over all
    // of them; when every ring is blocked, fall back to the earlier buoys.
    for (std::size_t back = 0; back < tile.offsets.size() && !found; ++back) {
      const Point anchor = tile.offsets[tile.offsets.size() - 1 - back];
      if (back == 1) {
        objective.log("sub-layout buoy " + std::to_string(k + 1) +
                      ": previous buoy boxed in, sampling around an earlier one");
      }
      for (std::size_t retry = 0; retry <= params.radius_retries; ++retry) {
        const double radius =
            params.sample_radius * (1.0 + 0.25 * static_cast<double>(retry)) + kRepairMargin;
        for (std::size_t a = 0; a < params.samples; ++a) {
          // Angles mirrored about the dominant direction.
          const double half = static_cast<double>(a / 2) + 0.5;
          const double sign = a % 2 == 0 ? 1.0 : -1.0;
          const double angle =
              beta + sign * half * 2.0 * std::numbers::pi / static_cast<double>(params.samples);
          const Point p{anchor.x + radius * std::cos(angle), anchor.y + radius * std::sin(angle)};
          if (p.x < lo || p.x > hi || p.y < lo || p.y > hi || !clear_of(p, tile.offsets, min_distance)) {
            continue;
          }
          const double value = (budget_left() && objective.used() - start < share) ? power_with(p) : kLost;
          if (!found || value > best_value) {
            best = p;
            best_value = value;
            found = true;
          }
        }
      }
    }
    if (!found) {
      throw Error(ErrorCode::invalid_layout,
                  "no feasible position for sub-layout buoy " + std::to_string(k + 1));
    }

    const std::size_t spent = objective.used() - start;
    if (best_value != kLost && spent < share && budget_left()) {
      SimplexConfig cfg;
      cfg.initial_edge = params.simplex_edge;
      cfg.max_iters = params.simplex_iterations;
      cfg.max_evaluations = std::min(share - spent, stop_at - objective.used());
      auto f = [&](std::span<const double> v) {
        const Point p{v[0], v[1]};
        if (!clear_of(p, tile.offsets, min_distance)) return std::numeric_limits<double>::infinity();
        return -power_with(p);
      };
      Box box{{lo, lo}, {hi, hi}};
      const auto result = minimize(f, {best.x, best.y}, box, cfg, rng);
      if (-result.f >= best_value) {
        best = {result.x[0], result.x[1]};
        best_value = -result.f;
      }
    }
    tile.offsets.push_back(best);
    tile_power = best_value;
  }
  if (tile_power == kLost && budget_left()) tile_power = objective.evaluate_partial(tile.offsets);
  tile.power = tile_power;
  return tile;
}

MosaicDecoder::MosaicDecoder(TileGrid grid, SubLayout tile, std::size_t remainder)
    : grid_(grid), tile_(std::move(tile)), remainder_(remainder) {
  const Point centre{grid_.tile_side / 2.0, grid_.tile_side / 2.0};
  for (int k = 0; k < 8; ++k) {
    rotated_[static_cast<std::size_t>(k)] = rotate_offsets(tile_.offsets, centre, k);
    fits_[static_cast<std::size_t>(k)] = grid_.fits(rotated_[static_cast<std::size_t>(k)]);
  }
  if (!fits_[0]) throw Error(ErrorCode::invalid_layout, "sub-layout does not fit its tile");
}

Layout MosaicDecoder::assemble(const Genome& tiles, std::span<const std::uint8_t> rotation,
                               std::vector<std::size_t>* owner) const {
  if (tiles.size() != grid_.tiles()) {
    throw Error(ErrorCode::invalid_argument, "tile genome has the wrong length");
  }
  constexpr std::size_t kNoTile = static_cast<std::size_t>(-1);
  Layout layout{grid_.farm_side, {}};
  std::size_t extra = remainder_;
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const Point o = grid_.origin(t);
    if (tiles[t]) {
      const std::size_t k = t < rotation.size() ? rotation[t] & 7u : 0;
      for (const auto& p : rotated_[k]) {
        layout.positions.push_back({o.x + p.x, o.y + p.y});
        if (owner) owner->push_back(t);
      }
    } else if (extra > 0) {
      layout.positions.push_back({o.x + grid_.tile_side / 2.0, o.y + grid_.tile_side / 2.0});
      if (owner) owner->push_back(kNoTile);
      --extra;
    }
  }
  return clamp_to_farm(std::move(layout));
}

std::vector<std::uint8_t> MosaicDecoder::settle(const Genome& tiles,
                                                std::span<const std::uint8_t> rotation) const {
  std::vector<std::uint8_t> rot(tiles.size(), 0);
  for (std::size_t t = 0; t < tiles.size() && t < rotation.size(); ++t) {
    if (tiles[t]) rot[t] = rotation[t] & 7u;
  }
  auto loose = [&](std::size_t t) { return t < rot.size() && !fits_[rot[t]]; };
  for (;;) {
    std::vector<std::size_t> owner;
    const Layout layout = assemble(tiles, rot, &owner);
    const auto report = measure_violations(layout.positions);
    if (report.feasible()) return rot;
    bool reset = false;
    for (const auto& pair : report.violating_pairs) {
      for (const std::size_t b : {pair.i, pair.j}) {
        if (loose(owner[b])) {
          rot[owner[b]] = 0;
          reset = true;
          break;
        }
      }
      if (reset) break;
    }
    // Tiles inside their margin boxes never conflict, so this cannot loop.
    if (!reset) throw Error(ErrorCode::invalid_layout, "mosaic decoding produced an infeasible farm");
  }
}

Layout MosaicDecoder::decode(const Genome& tiles, std::span<const std::uint8_t> rotation) const {
  return assemble(tiles, settle(tiles, rotation), nullptr);
}

Population smart_init(const MosaicDecoder& decoder, std::size_t ones, std::size_t lambda,
                      const GenomeFitness& fitness, Rng& rng) {
  Population population;
  population.ones = ones;
  for (std::size_t i = 0; i < lambda; ++i) {
    population.genomes.push_back(random_genome(decoder.grid().tiles(), ones, rng));
    population.payload.emplace_back(decoder.grid().tiles(), 0);
    population.fitness.push_back(fitness(population.genomes.back(), population.payload.back()));
  }
  return population;
}

bool rotation_step(Population& population, const MosaicDecoder& decoder,
                   const GenomeFitness& fitness, Rng& rng) {
  if (population.genomes.empty()) return false;
  const std::size_t best = population.best_index();
  const Genome& bits = population.genomes[best];
  std::vector<std::size_t> occupied;
  for (std::size_t t = 0; t < bits.size(); ++t) {
    if (bits[t]) occupied.push_back(t);
  }
  if (occupied.empty()) return false;
  const double p = 1.0 / static_cast<double>(occupied.size());
  std::vector<std::size_t> chosen;
  for (auto t : occupied) {
    if (uniform01(rng) < p) chosen.push_back(t);
  }
  if (chosen.empty()) chosen.push_back(occupied[pick(rng, occupied.size())]);

  const auto current = decoder.settle(bits, population.payload[best]);
  std::vector<std::uint8_t> rotation = current;
  for (auto t : chosen) {
    const int steps = 1 + static_cast<int>(pick(rng, 7));
    rotation[t] = static_cast<std::uint8_t>((rotation[t] + steps) % 8);
  }
  // Rotations that would break the spacing are discarded here.
  rotation = decoder.settle(bits, rotation);
  if (rotation == current) return false;
  const double value = fitness(bits, rotation);
  if (value > population.fitness[best]) {
    population.payload[best] = std::move(rotation);
    population.fitness[best] = value;
    return true;
  }
  return false;
}

namespace {

RunRecord hybrid(const Problem& problem, const Budget& budget, const OptimizerParams& params,
                 Rng& rng, BinaryVariant variant, bool staged) {
  problem.validate();
  const auto& hp = params.hybrid;
  const std::size_t lambda = params.ea.population;
  if (lambda < 3) throw Error(ErrorCode::invalid_params, "hybrids need a population of at least 3");
  budget.validate(lambda);
  const TileGrid grid = TileGrid::for_farm(problem.side, hp.tile_buoys);
  const std::size_t ones = problem.buoys / hp.tile_buoys;
  const std::size_t remainder = problem.buoys % hp.tile_buoys;
  if (ones + remainder > grid.tiles()) {
    throw Error(ErrorCode::invalid_params, "farm has " + std::to_string(grid.tiles()) +
                                               " tiles, too few for the sub-layouts");
  }
  const auto total = static_cast<double>(budget.max_evaluations);
  const std::size_t surrogate_budget = std::min(
      hp.surrogate_cap, static_cast<std::size_t>(std::floor(hp.surrogate_fraction * total)));

  RunRecord record;
  Objective objective(problem, budget.max_evaluations, record);
  objective.set_stage(Stage::sls_nm);
  SubLayout tile = sls_nm_surrogate(objective, grid, hp.tile_buoys, hp, surrogate_budget, rng);
  if (remainder > 0) {
    objective.log(std::to_string(remainder) +
                  " buoys left over after filling sub-layouts; placed at the centres of empty tiles");
  }
  const MosaicDecoder decoder(grid, std::move(tile), remainder);
  const GenomeFitness fitness = [&](const Genome& g, std::span<const std::uint8_t> rotation) {
    return objective.evaluate(decoder.decode(g, rotation));
  };

  objective.set_stage(Stage::init);
  Population population = smart_init(decoder, ones, lambda, fitness, rng);

  objective.set_stage(Stage::binary);
  const std::size_t left = budget.max_evaluations - std::min(budget.max_evaluations, objective.used());
  BinaryEngine engine(variant, params, std::max<std::size_t>(1, left / lambda));
  ImprovementTracker tracker(hp.window);
  tracker.push(objective.best());
  const double stage1_end = budget.stage1_fraction * total;
  while (!objective.exhausted()) {
    if (staged && (static_cast<double>(objective.used()) > stage1_end ||
                   tracker.rate() < hp.stage1_threshold)) {
      break;
    }
    engine.step(population, fitness, rng);
    if (hp.rotation) rotation_step(population, decoder, fitness, rng);
    tracker.push(objective.best());
    objective.log_generation(tracker.rate());
  }
  if (!staged || objective.exhausted()) return record;

  const double stage2_end = budget.stage2_fraction * total;
  if (static_cast<double>(objective.used()) <= stage2_end) {
    objective.set_stage(Stage::dls);
    tracker.reset();
    tracker.push(objective.best());
    dls_search(objective, objective.best_layout(), objective.best(), DlsVariant::one_cell,
               params.discrete, rng, lambda, [&] {
                 tracker.push(objective.best());
                 objective.log_generation(tracker.rate());
                 return tracker.rate() >= hp.stage2_threshold &&
                        static_cast<double>(objective.used()) <= stage2_end;
               });
  }

  objective.set_stage(Stage::cls);
  cls_search(objective, objective.best_layout(), objective.best(), objective.remaining(),
             params.cls, rng);
  return record;
}

}  // namespace

RunRecord ms_run(const Problem& problem, const Budget& budget, const OptimizerParams& params,
                 Rng& rng, BinaryVariant variant) {
  return hybrid(problem, budget, params, rng, variant, true);
}

RunRecord slsnm_hybrid_run(const Problem& problem, const Budget& budget,
                           const OptimizerParams& params, Rng& rng, BinaryVariant variant) {
  return hybrid(problem, budget, params, rng, variant, false);
}

}  // namespace wecfarm
