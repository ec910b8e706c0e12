#pragma once

#include <cstddef>

#include "wecfarm/objective.hpp"
#include "wecfarm/params.hpp"
#include "wecfarm/random.hpp"

namespace wecfarm {

enum class DeVariant { rand1bin, best1bin_adaptive };

// Scale factor of the adaptive DE at generation g (1-based) of gmax.
double ide_scale(std::size_t generation, std::size_t max_generations, double scale0);

// Random starting layout: uniform positions, repaired when spacing applies.
Layout random_layout(const Problem& problem, Rng& rng);

// Perturbs each buoy with probability p (at least one buoy when p > 0) by N(0, sigma)
// per axis, then clamps to the farm.
Layout mutate_buoys(const Layout& layout, double sigma, double p, Rng& rng);

// Clamp + repair as the boundary and spacing rules require. Returns false when
// repair failed; the layout is then left as the caller's to reject.
bool make_feasible(const Problem& problem, Layout& layout, Rng& rng);

RunRecord one_plus_one_ea(const Problem& problem, const Budget& budget,
                          const OptimizerParams& params, Rng& rng);
RunRecord differential_evolution(const Problem& problem, const Budget& budget,
                                 const OptimizerParams& params, Rng& rng, DeVariant variant);
RunRecord ls_nm(const Problem& problem, const Budget& budget, const OptimizerParams& params,
                Rng& rng);

// Continuous local search from a feasible start with a linearly shrinking step.
// Runs inside an existing objective for `evaluations` calls.
void cls_search(Objective& objective, Layout start, double start_value, std::size_t evaluations,
                const ClsParams& params, Rng& rng);
RunRecord cls(const Problem& problem, const Layout& start, const Budget& budget,
              const OptimizerParams& params, Rng& rng);

// Step length used by the CLS at step t of T (0-based).
double cls_sigma(std::size_t step, std::size_t steps, const ClsParams& params);

}  // namespace wecfarm
