#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wecfarm/layout.hpp"

namespace wecfarm {

class FarmEvaluator;

// What the optimizers maximise: a power-like function of buoy positions in
// the square [0, side]^2.
struct Problem {
  std::size_t buoys = 0;
  double side = 0.0;
  std::function<double(std::span<const Point>)> power;
  // When false the 50 m spacing is not enforced (analytic test objectives).
  bool enforce_spacing = true;
  // Mean wave heading (rad), used by the sub-layout construction.
  double dominant_direction = 0.0;

  void validate() const;
};

// Annual power of a farm of `buoys` buoys in a farm sized for them.
Problem farm_problem(std::shared_ptr<const FarmEvaluator> evaluator, std::size_t buoys);

struct Budget {
  std::size_t max_evaluations = 5000;
  double stage1_fraction = 1.0 / 3.0;
  double stage2_fraction = 2.0 / 3.0;

  // Error(invalid_budget) unless max_evaluations >= minimum and 0 < s1 < s2 < 1.
  void validate(std::size_t minimum = 1) const;
};

enum class Stage { init, search, sls_nm, binary, dls, cls };
std::string_view stage_name(Stage stage);

struct CurvePoint {
  std::size_t evaluation = 0;  // 1-based count of objective calls so far
  double best = 0.0;
  Stage stage = Stage::search;
};

struct GenerationLog {
  std::size_t evaluation = 0;
  Stage stage = Stage::search;
  double best = 0.0;
  double improvement_rate = 0.0;  // +inf until the window has filled
};

struct RunRecord {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;
  std::size_t skipped = 0;  // infeasible candidates that were not evaluated
  double best_power = -std::numeric_limits<double>::infinity();
  Layout best_layout;
  std::vector<CurvePoint> curve;  // one point per full-farm evaluation
  std::vector<GenerationLog> generations;
  std::vector<std::string> events;

  // Line-delimited records: "evaluation,best,stage".
  void write_curve(std::ostream& out) const;
};

// Budget-counting wrapper shared by all optimizers. Full-farm evaluations
// update the best-so-far curve; partial evaluations (fewer buoys) only count.
class Objective {
 public:
  Objective(const Problem& problem, std::size_t budget, RunRecord& record);

  const Problem& problem() const noexcept { return problem_; }
  std::size_t used() const noexcept { return record_.evaluations; }
  std::size_t budget() const noexcept { return budget_; }
  std::size_t remaining() const noexcept { return budget_ - std::min(budget_, used()); }
  // Out of evaluations, or stuck skipping infeasible candidates.
  bool exhausted() const noexcept;

  // Power of a full layout; -inf (and a log entry, no budget) when the layout
  // is infeasible, -inf without evaluating when the budget is spent.
  double evaluate(const Layout& layout);
  // Power of a subset of buoys. Counts against the budget, never becomes best.
  double evaluate_partial(std::span<const Point> positions);

  double best() const noexcept { return record_.best_power; }
  const Layout& best_layout() const noexcept { return record_.best_layout; }

  void set_stage(Stage stage) noexcept { stage_ = stage; }
  Stage stage() const noexcept { return stage_; }
  void log(std::string event) { record_.events.push_back(std::move(event)); }
  void log_generation(double improvement_rate);

  RunRecord& record() noexcept { return record_; }

 private:
  bool feasible(const Layout& layout) const;

  const Problem& problem_;
  std::size_t budget_;
  RunRecord& record_;
  Stage stage_ = Stage::init;
};

// Relative gain of the best value over the last `window` generations.
class ImprovementTracker {
 public:
  explicit ImprovementTracker(std::size_t window = 5) : window_(window) {}
  void push(double best);
  // +inf until window + 1 values have been pushed.
  double rate() const;
  void reset() { history_.clear(); }

 private:
  std::size_t window_;
  std::deque<double> history_;
};

}  // namespace wecfarm
