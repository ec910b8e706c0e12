#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wecfarm/climate.hpp"
#include "wecfarm/hydro.hpp"

namespace wecfarm {

// Fast annual-power evaluation for a fixed model and climate.
//
// Uses the structure of the interaction model: coupling only joins like DOFs,
// so Z splits into three N x N systems, DOFs with identical coefficients share
// one of them, and Z does not depend on the wave direction, so each frequency
// needs one factorisation for all directions and sea states. Excitation phases
// are taken relative to the layout's lower-left corner; a common phase factor
// does not change the absorbed power.
class FarmEvaluator {
 public:
  struct Result {
    double total = 0.0;
    std::vector<double> per_buoy;
  };

  FarmEvaluator(HydroModel model, WaveClimate climate);

  Result evaluate(std::span<const Point> positions) const;
  double annual_power(std::span<const Point> positions) const {
    return evaluate(positions).total;
  }
  // Annual power of one buoy on its own.
  double isolated_power() const noexcept { return isolated_power_; }
  // Error(undefined_q) for an empty layout or zero isolated power.
  double q_factor(std::span<const Point> positions) const;

  const HydroModel& model() const noexcept { return model_; }
  const WaveClimate& climate() const noexcept { return climate_; }

 private:
  struct DofGroup {
    cplx diagonal;           // -omega^2 (m + A) + K + i omega (B + D)
    double coupling = 0.0;   // omega B; off-diagonal entry is i * coupling * kernel(k d)
    double excitation = 0.0;
    double power_weight = 0.0;  // omega^2 D / 2
    int multiplicity = 1;       // DOFs sharing these coefficients
  };
  struct FrequencyNode {
    double omega = 0.0;
    double k = 0.0;
    std::vector<double> cos_beta;
    std::vector<double> sin_beta;
    std::vector<double> weights;  // sum_s O_s S_s d_omega d_beta for active directions
    std::vector<DofGroup> groups;
  };

  HydroModel model_;
  WaveClimate climate_;
  std::vector<FrequencyNode> nodes_;
  double isolated_power_ = 0.0;
};

}  // namespace wecfarm
