#include "wecfarm/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wecfarm/error.hpp"
#include "wecfarm/kernels.hpp"

namespace wecfarm {
namespace {

// Directions whose combined spectral weight is below this fraction of the
// largest node weight are dropped.
constexpr double kNegligibleWeight = 1e-14;
constexpr double kPivotRatioLimit = 1e12;

}  // namespace

FarmEvaluator::FarmEvaluator(HydroModel model, WaveClimate climate)
    : model_(std::move(model)), climate_(std::move(climate)) {
  model_.table.validate();
  model_.buoy.validate();
  climate_.validate();
  if (!model_.coupling) model_.coupling = bessel_coupling();

  const SpectralGrid& grid = climate_.grid;
  std::vector<double> combined(grid.n_omega() * grid.n_beta(), 0.0);
  for (std::size_t s = 0; s < climate_.states.size(); ++s) {
    const double o = climate_.occurrence[s];
    for (std::size_t n = 0; n < combined.size(); ++n) {
      combined[n] += o * climate_.states[s].density[n] * grid.d_omega * grid.d_beta;
    }
  }
  const double peak = *std::max_element(combined.begin(), combined.end());

  for (std::size_t i = 0; i < grid.n_omega(); ++i) {
    FrequencyNode node;
    node.omega = grid.omegas[i];
    node.k = wave_number(node.omega);
    for (std::size_t j = 0; j < grid.n_beta(); ++j) {
      const double w = combined[i * grid.n_beta() + j];
      if (!(w > kNegligibleWeight * peak)) continue;
      node.weights.push_back(w);
      node.cos_beta.push_back(std::cos(grid.betas[j]));
      node.sin_beta.push_back(std::sin(grid.betas[j]));
    }
    if (node.weights.empty()) continue;

    const HydroCoefficients c = model_.table.at(node.omega);
    const double w = node.omega;
    for (std::size_t d = 0; d < kDofs; ++d) {
      DofGroup g;
      g.diagonal = cplx(model_.buoy.pto_stiffness[d] - w * w * (model_.buoy.mass + c.added_mass[d]),
                        w * (c.damping[d] + model_.buoy.pto_damping[d]));
      g.coupling = w * c.damping[d];
      g.excitation = c.excitation[d];
      g.power_weight = 0.5 * w * w * model_.buoy.pto_damping[d];
      if (g.power_weight == 0.0 || g.excitation == 0.0) continue;
      auto same = std::find_if(node.groups.begin(), node.groups.end(), [&](const DofGroup& o) {
        return o.diagonal == g.diagonal && o.coupling == g.coupling &&
               o.excitation == g.excitation && o.power_weight == g.power_weight;
      });
      if (same != node.groups.end()) {
        ++same->multiplicity;
      } else {
        node.groups.push_back(g);
      }
    }
    if (!node.groups.empty()) nodes_.push_back(std::move(node));
  }
  const Point origin{0.0, 0.0};
  isolated_power_ = evaluate(std::span<const Point>(&origin, 1)).total;
}

FarmEvaluator::Result FarmEvaluator::evaluate(std::span<const Point> positions) const {
  const std::size_t n = positions.size();
  Result result;
  result.per_buoy.assign(n, 0.0);
  if (n == 0) return result;
  if (!all_finite(positions)) throw Error(ErrorCode::invalid_layout, "non-finite buoy position");

  double ref_x = positions[0].x;
  double ref_y = positions[0].y;
  for (const auto& p : positions) {
    ref_x = std::min(ref_x, p.x);
    ref_y = std::min(ref_y, p.y);
  }
  std::vector<double> rel_x(n), rel_y(n);
  for (std::size_t b = 0; b < n; ++b) {
    rel_x[b] = positions[b].x - ref_x;
    rel_y[b] = positions[b].y - ref_y;
  }
  // pair distances, upper triangle row-major
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t a = 0; a + 1 < n; ++a) {
    kernels::distances_from(rel_x[a], rel_y[a], std::span(rel_x).subspan(a + 1),
                            std::span(rel_y).subspan(a + 1),
                            std::span(dist).subspan(a * n + a + 1, n - a - 1));
  }

  std::vector<double> kernel(n * n, 0.0);
  std::vector<cplx> phases;
  std::vector<cplx> rhs;
  ComplexLu lu;
  for (const FrequencyNode& node : nodes_) {
    for (std::size_t a = 0; a + 1 < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        kernel[a * n + b] = model_.coupling(node.k * dist[a * n + b]);
      }
    }
    const std::size_t m = node.weights.size();
    phases.resize(n * m);
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t j = 0; j < m; ++j) {
        const double phase = node.k * (rel_x[b] * node.cos_beta[j] + rel_y[b] * node.sin_beta[j]);
        phases[b * m + j] = cplx(std::cos(phase), std::sin(phase));
      }
    }
    for (const DofGroup& g : node.groups) {
      ComplexMatrix z(n);
      for (std::size_t a = 0; a < n; ++a) {
        z(a, a) = g.diagonal;
        for (std::size_t b = a + 1; b < n; ++b) {
          const cplx v(0.0, g.coupling * kernel[a * n + b]);
          z(a, b) = v;
          z(b, a) = v;
        }
      }
      lu.factor(std::move(z));
      if (!lu.ok() || !(lu.pivot_ratio() <= kPivotRatioLimit)) {
        std::ostringstream msg;
        msg << "impedance matrix is singular or ill-conditioned at omega = " << node.omega
            << " rad/s";
        throw Error(ErrorCode::solver_failure, msg.str());
      }
      rhs.resize(n * m);
      for (std::size_t e = 0; e < n * m; ++e) rhs[e] = g.excitation * phases[e];
      lu.solve_in_place(rhs, m);
      for (std::size_t b = 0; b < n; ++b) {
        result.per_buoy[b] +=
            static_cast<double>(g.multiplicity) * g.power_weight *
            kernels::weighted_norm_sq(node.weights, std::span(rhs).subspan(b * m, m));
      }
    }
  }
  for (double p : result.per_buoy) result.total += p;
  return result;
}

double FarmEvaluator::q_factor(std::span<const Point> positions) const {
  if (positions.empty()) throw Error(ErrorCode::undefined_q, "q-factor of an empty layout");
  if (!(isolated_power_ > 0.0)) {
    throw Error(ErrorCode::undefined_q, "isolated buoy power is zero; q-factor undefined");
  }
  return evaluate(positions).total / (static_cast<double>(positions.size()) * isolated_power_);
}

}  // namespace wecfarm
