#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "wecfarm/error.hpp"
#include "wecfarm/farm.hpp"
#include "wecfarm/simplex.hpp"

using namespace wecfarm;

TEST_SUITE("farm") {
  TEST_CASE("farm side") {
    CHECK(farm_side(49) == doctest::Approx(989.9494936611665).epsilon(1e-14));
    CHECK(farm_side(100) == doctest::Approx(1414.213562373095).epsilon(1e-14));
    CHECK(farm_side(1) == doctest::Approx(141.4213562373095).epsilon(1e-14));
  }

  TEST_CASE("violation sums") {
    // Pairwise distances 40, 45, 60: points on a line are not enough, so use a triangle.
    // a=(0,0), b=(40,0); c chosen with |ac| = 60, |bc| = 45.
    const double cx = (40.0 * 40.0 + 60.0 * 60.0 - 45.0 * 45.0) / 80.0;
    const double cy = std::sqrt(60.0 * 60.0 - cx * cx);
    const std::vector<Point> tri{{0, 0}, {40, 0}, {cx, cy}};
    const auto r = measure_violations(tri);
    CHECK(r.sum_dist == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(r.violating_pairs.size() == 2);

    const std::vector<Point> line{{0, 0}, {30, 0}, {60, 0}};
    const auto l = measure_violations(line);
    CHECK(l.sum_dist == doctest::Approx(40.0));
    CHECK(l.violating_pairs.size() == 2);
    CHECK(violation_sum(line) == doctest::Approx(40.0));

    const std::vector<Point> fine{{0, 0}, {50, 0}, {0, 50}};
    CHECK(measure_violations(fine).sum_dist == 0.0);
    CHECK(measure_violations(fine).feasible());
    CHECK(measure_violations(line).to_json().find("\"sum_dist\":40") != std::string::npos);
  }

  TEST_CASE("violation is monotone when moving towards a violating partner") {
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
      auto pts = testing::random_points(6, 150.0, rng);
      const auto rep = measure_violations(pts);
      if (rep.violating_pairs.empty()) continue;
      const auto& pair = rep.violating_pairs.front();
      auto moved = pts;
      auto& p = moved[pair.i];
      const auto& q = moved[pair.j];
      p.x += 0.3 * (q.x - p.x);
      p.y += 0.3 * (q.y - p.y);
      // Only the violating pair's distance shrank; others may change, so
      // check the pair contribution directly.
      CHECK(kSafetyDistance - distance(p, q) >= pair.shortfall);
    }
  }

  TEST_CASE("penalty") {
    CHECK(penalty(0.0) == 1.0);
    CHECK(penalty(1.0) == 1048576.0);
    CHECK(penalty(0.5) == doctest::Approx(3325.256730079651).epsilon(1e-12));
    CHECK(penalty(2.0) > penalty(1.9));
    CHECK_THROWS_AS(penalty(-1.0), Error);
  }

  TEST_CASE("clamping") {
    Layout a{990.0, {{-10, 500}, {995, 1200}, {10, 20}}};
    const Layout c = clamp_to_farm(a);
    CHECK(c.positions[0] == Point{0, 500});
    CHECK(c.positions[1] == Point{990, 990});
    CHECK(c.positions[2] == Point{10, 20});
    CHECK(clamp_to_farm(c) == c);
  }

  TEST_CASE("repair") {
    Rng rng(1);
    Layout ok{300.0, {{0, 0}, {100, 0}, {0, 100}}};
    const auto same = repair(ok, rng);
    CHECK(same.repaired);
    CHECK(same.layout == ok);

    Layout close{400.0, {{200, 200}, {230, 200}}};
    const auto fixed = repair(close, rng);
    CHECK(fixed.repaired);
    CHECK(distance(fixed.layout.positions[0], fixed.layout.positions[1]) >= 50.0);
    CHECK(in_bounds(fixed.layout));

    Layout coincident{400.0, {{100, 100}, {100, 100}, {300, 300}}};
    const auto split = repair(coincident, rng);
    CHECK(split.repaired);
    CHECK(split.layout.positions[2] == Point{300, 300});  // not a violator, untouched

    // No third state over many random farms.
    int flagged = 0;
    for (int seed = 0; seed < 100; ++seed) {
      Rng r(static_cast<std::uint64_t>(seed));
      Layout l{farm_side(16), testing::random_points(16, farm_side(16), r)};
      const auto out = repair(l, r);
      if (out.repaired) {
        CHECK(is_feasible(out.layout));
      } else {
        ++flagged;
        CHECK_FALSE(out.remaining.feasible());
      }
    }
    MESSAGE("unrepaired layouts: " << flagged << " / 100");
  }
}

TEST_SUITE("simplex") {
  TEST_CASE("quadratic bowl") {
    Rng rng(1);
    SimplexConfig cfg;
    cfg.initial_edge = 1.0;
    const auto r = minimize([](std::span<const double> x) { return (x[0] - 3) * (x[0] - 3); }, {0.0},
                            Box::uniform(1, -10, 10), cfg, rng);
    CHECK(std::abs(r.x[0] - 3.0) < 1e-4);
    CHECK(r.f <= 9.0);
  }

  TEST_CASE("flat objective returns the start") {
    Rng rng(1);
    SimplexConfig cfg;
    const auto r = minimize([](std::span<const double>) { return 4.2; }, {1.0, 2.0},
                            Box::uniform(2, 0, 10), cfg, rng);
    CHECK(r.x == std::vector<double>{1.0, 2.0});
    CHECK(r.reason == SimplexStop::converged);
  }

  TEST_CASE("Rosenbrock within 500 iterations") {
    Rng rng(1);
    SimplexConfig cfg;
    cfg.initial_edge = 0.1;
    cfg.max_iters = 500;
    const auto r = minimize(
        [](std::span<const double> x) {
          return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
        },
        {-1.2, 1.0}, Box::uniform(2, -5, 5), cfg, rng);
    CHECK(r.f < 1e-3);
    CHECK(r.iterations <= 500);
  }

  TEST_CASE("trace is non-increasing, deterministic, inside the box") {
    auto f = [](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += std::sin(x[i] * (i + 1)) + 0.01 * x[i] * x[i];
      return s;
    };
    const Box box = Box::uniform(4, -2, 3);
    bool inside = true;
    auto g = [&](std::span<const double> x) {
      inside = inside && box.contains(x);
      return f(x);
    };
    SimplexConfig cfg;
    cfg.initial_edge = 2.0;
    cfg.max_iters = 300;
    Rng a(9), b(9);
    const auto r1 = minimize(g, {0, 0, 0, 0}, box, cfg, a);
    const auto r2 = minimize(g, {0, 0, 0, 0}, box, cfg, b);
    CHECK(inside);
    CHECK(r1.x == r2.x);
    CHECK(r1.best_trace == r2.best_trace);
    for (std::size_t i = 1; i < r1.best_trace.size(); ++i) CHECK(r1.best_trace[i] <= r1.best_trace[i - 1]);
    CHECK(r1.f <= f(std::vector<double>{0, 0, 0, 0}));
  }

  TEST_CASE("invalid start and parameters") {
    Rng rng(1);
    SimplexConfig cfg;
    try {
      minimize([](std::span<const double>) { return NAN; }, {0.0}, Box::uniform(1, -1, 1), cfg, rng);
      FAIL("expected invalid start");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_start);
    }
    cfg.expansion = 0.5;
    CHECK_THROWS_AS(minimize([](std::span<const double>) { return 0.0; }, {0.0}, Box::uniform(1, -1, 1), cfg, rng),
                    Error);
  }
}
