#include "wecfarm/objective.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "wecfarm/error.hpp"
#include "wecfarm/evaluator.hpp"
#include "wecfarm/farm.hpp"

namespace wecfarm {

void Problem::validate() const {
  if (!power) throw Error(ErrorCode::invalid_argument, "problem has no objective");
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw Error(ErrorCode::invalid_layout, "farm side must be positive");
  }
}

Problem farm_problem(std::shared_ptr<const FarmEvaluator> evaluator, std::size_t buoys) {
  if (!evaluator) throw Error(ErrorCode::invalid_argument, "no evaluator");
  Problem p;
  p.buoys = buoys;
  p.side = farm_side(buoys);
  p.dominant_direction = evaluator->climate().dominant_direction();
  p.power = [evaluator](std::span<const Point> positions) {
    return evaluator->annual_power(positions);
  };
  return p;
}

void Budget::validate(std::size_t minimum) const {
  if (max_evaluations < std::max<std::size_t>(minimum, 1)) {
    throw Error(ErrorCode::invalid_budget,
                "budget of " + std::to_string(max_evaluations) + " evaluations is below the minimum of " +
                    std::to_string(std::max<std::size_t>(minimum, 1)));
  }
  if (!(stage1_fraction > 0.0 && stage1_fraction < stage2_fraction && stage2_fraction < 1.0)) {
    throw Error(ErrorCode::invalid_budget, "stage fractions need 0 < s1 < s2 < 1");
  }
}

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::init: return "init";
    case Stage::search: return "search";
    case Stage::sls_nm: return "sls_nm";
    case Stage::binary: return "binary";
    case Stage::dls: return "dls";
    case Stage::cls: return "cls";
  }
  return "unknown";
}

void RunRecord::write_curve(std::ostream& out) const {
  std::ostringstream line;
  line.precision(17);
  for (const auto& p : curve) {
    line.str({});
    line << p.evaluation << ',' << p.best << ',' << stage_name(p.stage) << '\n';
    out << line.str();
  }
}

Objective::Objective(const Problem& problem, std::size_t budget, RunRecord& record)
    : problem_(problem), budget_(budget), record_(record) {
  problem_.validate();
}

bool Objective::exhausted() const noexcept {
  return used() >= budget_ || record_.skipped >= 10 * budget_ + 100;
}

bool Objective::feasible(const Layout& layout) const {
  if (!all_finite(layout.positions) || !in_bounds(layout)) return false;
  return !problem_.enforce_spacing || violation_sum(layout.positions) == 0.0;
}

double Objective::evaluate(const Layout& layout) {
  constexpr double lost = -std::numeric_limits<double>::infinity();
  if (exhausted()) return lost;
  if (!feasible(layout)) {
    ++record_.skipped;
    log("skipped infeasible candidate at evaluation " + std::to_string(used()));
    return lost;
  }
  ++record_.evaluations;
  const double value = problem_.power(layout.positions);
  if (value > record_.best_power) {
    record_.best_power = value;
    record_.best_layout = layout;
  }
  record_.curve.push_back({record_.evaluations, record_.best_power, stage_});
  return value;
}

double Objective::evaluate_partial(std::span<const Point> positions) {
  if (exhausted()) return -std::numeric_limits<double>::infinity();
  ++record_.evaluations;
  return problem_.power(positions);
}

void Objective::log_generation(double improvement_rate) {
  record_.generations.push_back({used(), stage_, record_.best_power, improvement_rate});
}

void ImprovementTracker::push(double best) {
  history_.push_back(best);
  while (history_.size() > window_ + 1) history_.pop_front();
}

double ImprovementTracker::rate() const {
  if (history_.size() < window_ + 1) return std::numeric_limits<double>::infinity();
  const double then = history_.front();
  const double now = history_.back();
  if (then == now) return 0.0;
  if (then == 0.0 || !std::isfinite(then)) return std::numeric_limits<double>::infinity();
  return (now - then) / std::abs(then);
}

}  // namespace wecfarm
