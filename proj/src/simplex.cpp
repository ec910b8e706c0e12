#include "wecfarm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wecfarm/error.hpp"

namespace wecfarm {

void SimplexConfig::validate() const {
  if (!(reflection > 0.0) || !(expansion > 1.0) || !(contraction > 0.0 && contraction < 1.0) ||
      !(shrink > 0.0 && shrink < 1.0) || !(initial_edge > 0.0)) {
    throw Error(ErrorCode::invalid_params,
                "simplex coefficients need reflection > 0, expansion > 1, 0 < contraction, shrink < 1 "
                "and a positive initial edge");
  }
}

Box Box::uniform(std::size_t dims, double lo, double hi) {
  return Box{std::vector<double>(dims, lo), std::vector<double>(dims, hi)};
}

void Box::clamp(std::span<double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

namespace {

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

}  // namespace

SimplexResult minimize(const SimplexObjective& f, std::vector<double> x0, const Box& box,
                       const SimplexConfig& config, Rng& rng) {
  config.validate();
  const std::size_t d = x0.size();
  if (d == 0) throw Error(ErrorCode::invalid_argument, "simplex needs at least one dimension");
  if (box.lower.size() != d || box.upper.size() != d) {
    throw Error(ErrorCode::invalid_argument, "simplex box does not match the start point");
  }
  if (!box.contains(x0)) throw Error(ErrorCode::invalid_argument, "simplex start outside its box");

  SimplexResult result;
  auto evaluate = [&](std::vector<double>& x) {
    box.clamp(x);
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  auto budget_left = [&] { return result.evaluations < config.max_evaluations; };

  std::vector<Vertex> simplex;
  simplex.reserve(d + 1);
  {
    Vertex start{x0, 0.0};
    ++result.evaluations;
    start.f = f(start.x);
    if (!std::isfinite(start.f)) {
      throw Error(ErrorCode::invalid_start, "objective is not finite at the simplex start point");
    }
    simplex.push_back(std::move(start));
  }
  for (std::size_t i = 0; i < d && budget_left(); ++i) {
    Vertex v{x0, 0.0};
    const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    double step = sign * config.initial_edge;
    if (x0[i] + step > box.upper[i] || x0[i] + step < box.lower[i]) step = -step;
    v.x[i] += step;
    v.f = evaluate(v.x);
    simplex.push_back(std::move(v));
  }

  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  auto finish = [&](SimplexStop reason) {
    order();
    result.x = simplex.front().x;
    result.f = simplex.front().f;
    result.reason = reason;
    return result;
  };

  if (simplex.size() < d + 1) return finish(SimplexStop::max_evaluations);

  std::vector<double> centroid(d);
  auto point_along = [&](const std::vector<double>& from, double t) {
    // centroid + t (from - centroid)
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = centroid[k] + t * (from[k] - centroid[k]);
    return x;
  };

  order();
  while (true) {
    const Vertex& best = simplex.front();
    if (config.target && best.f <= *config.target) return finish(SimplexStop::target_reached);
    const double spread = simplex.back().f - best.f;
    double diameter = 0.0;
    for (std::size_t v = 1; v <= d; ++v) {
      for (std::size_t k = 0; k < d; ++k) {
        diameter = std::max(diameter, std::abs(simplex[v].x[k] - best.x[k]));
      }
    }
    if ((std::isfinite(spread) && spread <= config.f_tolerance * (1.0 + std::abs(best.f))) ||
        diameter <= config.x_tolerance) {
      return finish(SimplexStop::converged);
    }
    if (result.iterations >= config.max_iters) return finish(SimplexStop::max_iterations);
    if (!budget_left()) return finish(SimplexStop::max_evaluations);
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < d; ++v) {
      for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[v].x[k];
    }
    for (auto& c : centroid) c /= static_cast<double>(d);

    Vertex& worst = simplex.back();
    const double second_worst = simplex[d - 1].f;
    Vertex reflected{point_along(worst.x, -config.reflection), 0.0};
    reflected.f = evaluate(reflected.x);

    if (reflected.f < simplex.front().f) {
      if (budget_left()) {
        Vertex expanded{point_along(reflected.x, config.expansion), 0.0};
        expanded.f = evaluate(expanded.x);
        worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
      } else {
        worst = std::move(reflected);
      }
    } else if (reflected.f < second_worst) {
      worst = std::move(reflected);
    } else {
      bool accepted = false;
      if (budget_left()) {
        if (reflected.f < worst.f) {
          Vertex outside{point_along(reflected.x, config.contraction), 0.0};
          outside.f = evaluate(outside.x);
          if (outside.f <= reflected.f) {
            worst = std::move(outside);
            accepted = true;
          }
        } else {
          Vertex inside{point_along(worst.x, config.contraction), 0.0};
          inside.f = evaluate(inside.x);
          if (inside.f < worst.f) {
            worst = std::move(inside);
            accepted = true;
          }
        }
      }
      if (!accepted) {
        const std::vector<double> anchor = simplex.front().x;
        for (std::size_t v = 1; v <= d && budget_left(); ++v) {
          for (std::size_t k = 0; k < d; ++k) {
            simplex[v].x[k] = anchor[k] + config.shrink * (simplex[v].x[k] - anchor[k]);
          }
          simplex[v].f = evaluate(simplex[v].x);
        }
      }
    }
    order();
    result.best_trace.push_back(simplex.front().f);
  }
}

}  // namespace wecfarm
