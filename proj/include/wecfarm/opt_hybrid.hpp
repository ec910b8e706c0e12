#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wecfarm/objective.hpp"
#include "wecfarm/opt_discrete.hpp"
#include "wecfarm/params.hpp"
#include "wecfarm/random.hpp"

namespace wecfarm {

// Square tiles covering the farm. Buoys keep 25 m (plus the repair margin)
// away from their tile's edges, so any combination of filled tiles respects
// the 50 m spacing.
struct TileGrid {
  double farm_side = 0.0;
  double tile_side = 0.0;
  std::size_t per_side = 0;

  // per_side = floor(side / sqrt(tile_buoys * 20000)) + 1
  static TileGrid for_farm(double farm_side, std::size_t tile_buoys);
  std::size_t tiles() const noexcept { return per_side * per_side; }
  Point origin(std::size_t tile) const;
  double margin() const noexcept;
  // Offsets (tile coordinates) inside the margin box.
  bool fits(std::span<const Point> offsets) const;
};

struct SubLayout {
  std::vector<Point> offsets;  // tile coordinates
  double tile_side = 0.0;
  double power = 0.0;          // of the sub-layout on its own
};

// Clockwise rotation by steps * 45 degrees about `centre`.
std::vector<Point> rotate_offsets(std::span<const Point> offsets, Point centre, int steps);

// Builds the sub-layout one buoy at a time, spending at most `evaluations`
// partial evaluations of `objective`.
SubLayout sls_nm_surrogate(Objective& objective, const TileGrid& grid, std::size_t tile_buoys,
                           const HybridParams& params, std::size_t evaluations, Rng& rng);

// Maps tile genomes (plus a rotation index 0..7 per tile) to farm layouts.
class MosaicDecoder {
 public:
  MosaicDecoder(TileGrid grid, SubLayout tile, std::size_t remainder);

  // A tile rotated out of its margin box keeps that rotation only while the
  // farm stays feasible; otherwise it falls back to rotation 0.
  Layout decode(const Genome& tiles, std::span<const std::uint8_t> rotation) const;
  std::vector<std::uint8_t> settle(const Genome& tiles, std::span<const std::uint8_t> rotation) const;
  bool rotation_fits(int steps) const { return fits_[static_cast<std::size_t>(steps & 7)]; }
  const TileGrid& grid() const noexcept { return grid_; }
  const SubLayout& tile() const noexcept { return tile_; }

 private:
  Layout assemble(const Genome& tiles, std::span<const std::uint8_t> rotation,
                  std::vector<std::size_t>* owner) const;

  TileGrid grid_;
  SubLayout tile_;
  std::size_t remainder_;
  std::array<std::vector<Point>, 8> rotated_;
  std::array<bool, 8> fits_{};
};

// lambda genomes with `ones` occupied tiles each, rotations all zero.
Population smart_init(const MosaicDecoder& decoder, std::size_t ones, std::size_t lambda,
                      const GenomeFitness& fitness, Rng& rng);

// Rotates some occupied tiles of the best individual; keeps the result only
// when it is strictly better. Returns true on replacement.
bool rotation_step(Population& population, const MosaicDecoder& decoder,
                   const GenomeFitness& fitness, Rng& rng);

RunRecord ms_run(const Problem& problem, const Budget& budget, const OptimizerParams& params,
                 Rng& rng, BinaryVariant variant);
// The binary stage of ms_run on its own, for the whole budget.
RunRecord slsnm_hybrid_run(const Problem& problem, const Budget& budget,
                           const OptimizerParams& params, Rng& rng, BinaryVariant variant);

}  // namespace wecfarm
