#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "wecfarm/error.hpp"
#include "wecfarm/opt_continuous.hpp"
#include "wecfarm/opt_discrete.hpp"

using namespace wecfarm;

namespace {

std::shared_ptr<const FarmEvaluator> decoupled_evaluator() {
  static const auto ev = [] {
    const auto c = testing::two_state_climate();
    auto model = default_hydro_model(c);
    model.coupling = no_coupling();
    return std::make_shared<const FarmEvaluator>(model, c);
  }();
  return ev;
}

// Sphere in 2n dimensions on the usual [-5.12, 5.12] box (shifted), spacing off.
Problem sphere(std::size_t buoys) {
  Problem p = testing::centre_problem(buoys, false);
  p.side = 10.24;
  p.power = [](std::span<const Point> pts) {
    double s = 0.0;
    for (const auto& q : pts) s += (q.x - 5.12) * (q.x - 5.12) + (q.y - 5.12) * (q.y - 5.12);
    return -s;
  };
  return p;
}

}  // namespace

TEST_SUITE("continuous") {
  TEST_CASE("IDE scale schedule") {
    CHECK(ide_scale(1, 100, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ide_scale(1000000, 1000000, 0.5) == doctest::Approx(0.5 * std::pow(2.0, std::exp(1.0 - 1e6))).epsilon(1e-12));
    CHECK(ide_scale(1000000, 1000000, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    for (std::size_t g = 2; g <= 50; ++g) CHECK(ide_scale(g, 50, 0.5) <= ide_scale(g - 1, 50, 0.5));
    CHECK_THROWS_AS(ide_scale(0, 10, 0.5), Error);
  }

  TEST_CASE("1+1EA: budget of one, elitism, zero step") {
    const Problem p = testing::centre_problem(4);
    OptimizerParams params;
    Rng rng(3);
    const auto one = one_plus_one_ea(p, Budget{1}, params, rng);
    CHECK(one.evaluations == 1);
    CHECK(one.curve.size() == 1);

    Rng r2(3);
    const auto run = one_plus_one_ea(p, Budget{200}, params, r2);
    CHECK(run.evaluations == 200);
    CHECK(testing::non_decreasing(run));
    CHECK(run.best_power > run.curve.front().best);

    params.ea.sigma_fraction = 0.0;
    Rng r3(3);
    const auto flat = one_plus_one_ea(p, Budget{100}, params, r3);
    CHECK(flat.best_power == flat.curve.front().best);
    CHECK(flat.best_layout == one.best_layout);

    CHECK_THROWS_AS(one_plus_one_ea(p, Budget{0}, params, r3), Error);
  }

  TEST_CASE("DE on the sphere") {
    // 4 buoys without spacing = 8 dimensions.
    const Problem p = sphere(4);
    OptimizerParams params;
    for (const auto variant : {DeVariant::rand1bin, DeVariant::best1bin_adaptive}) {
      Rng rng(5);
      const auto run = differential_evolution(p, Budget{2000}, params, rng, variant);
      CHECK(run.evaluations == 2000);
      CHECK(testing::non_decreasing(run));
      if (variant == DeVariant::best1bin_adaptive) CHECK(-run.best_power < 1e-2);
      MESSAGE("DE variant " << static_cast<int>(variant) << " sphere best " << -run.best_power);
    }
    params.ea.population = 3;
    Rng rng(1);
    CHECK_THROWS_AS(differential_evolution(p, Budget{100}, params, rng, DeVariant::rand1bin), Error);
  }

  TEST_CASE("DE keeps every candidate feasible on the farm objective") {
    const Problem p = farm_problem(testing::two_state_evaluator(), 6);
    OptimizerParams params;
    Rng rng(8);
    const auto run = differential_evolution(p, Budget{150}, params, rng, DeVariant::rand1bin);
    CHECK(is_feasible(run.best_layout));
    CHECK(testing::non_decreasing(run));
    CHECK(run.curve.size() == run.evaluations);
  }

  TEST_CASE("LS-NM placements") {
    OptimizerParams params;
    const auto ev = testing::two_state_evaluator();
    {
      Rng rng(1);
      const auto run = ls_nm(farm_problem(ev, 1), Budget{60}, params, rng);
      REQUIRE(run.best_layout.size() == 1);
      CHECK(run.best_power == doctest::Approx(ev->isolated_power()).epsilon(1e-12));
    }
    {
      // Without coupling every placement gives the same power.
      const auto dec = decoupled_evaluator();
      Rng rng(2);
      const auto run = ls_nm(farm_problem(dec, 2), Budget{120}, params, rng);
      CHECK(run.best_power == doctest::Approx(2.0 * dec->isolated_power()).epsilon(1e-12));
      CHECK(run.evaluations < 120);  // the simplex exits on flatness
    }
    {
      Rng rng(4);
      const auto run = ls_nm(farm_problem(ev, 4), Budget{300}, params, rng);
      CHECK(run.best_layout.size() == 4);
      CHECK(is_feasible(run.best_layout));
      CHECK(testing::non_decreasing(run));
      CHECK(run.evaluations <= 300);
    }
    {
      // Budget too small for every buoy: grid fill completes the layout.
      Rng rng(4);
      const auto run = ls_nm(farm_problem(ev, 6), Budget{4}, params, rng);
      CHECK(run.best_layout.size() == 6);
      CHECK(is_feasible(run.best_layout));
      CHECK_FALSE(run.events.empty());
    }
  }

  TEST_CASE("CLS schedule and elitism") {
    ClsParams c;
    CHECK(cls_sigma(0, 100, c) == 20.0);
    CHECK(cls_sigma(99, 100, c) == 1.0);
    CHECK(cls_sigma(50, 101, c) == doctest::Approx(10.5));

    // Start at the optimum of the centre objective: the best never moves.
    Problem p = testing::centre_problem(1);
    Layout centre{p.side, {{p.side / 2, p.side / 2}}};
    Rng rng(6);
    const auto run = cls(p, centre, Budget{100}, OptimizerParams{}, rng);
    CHECK(run.best_power == 0.0);
    CHECK(run.best_layout == centre);
    CHECK(testing::non_decreasing(run));
  }

  TEST_CASE("mutation helpers") {
    Rng rng(7);
    Layout l{200.0, {{10, 10}, {100, 100}, {190, 190}}};
    CHECK(mutate_buoys(l, 30.0, 0.0, rng) == l);
    for (int t = 0; t < 100; ++t) {
      const auto m = mutate_buoys(l, 500.0, 0.3, rng);
      CHECK(in_bounds(m));
      CHECK_FALSE(m == l);
    }
  }

  TEST_CASE("same seed gives the same record") {
    const Problem p = farm_problem(testing::two_state_evaluator(), 5);
    OptimizerParams params;
    Rng a(11), b(11);
    const auto r1 = one_plus_one_ea(p, Budget{80}, params, a);
    const auto r2 = one_plus_one_ea(p, Budget{80}, params, b);
    CHECK(r1.best_layout == r2.best_layout);
    CHECK(r1.best_power == r2.best_power);
    CHECK(r1.curve.size() == r2.curve.size());
  }

  TEST_CASE("objective wrapper") {
    const Problem p = testing::centre_problem(2);
    RunRecord rec;
    Objective obj(p, 3, rec);
    Layout bad{p.side, {{10, 10}, {20, 10}}};
    CHECK(obj.evaluate(bad) == -std::numeric_limits<double>::infinity());
    CHECK(obj.used() == 0);
    CHECK(rec.skipped == 1);
    Layout ok{p.side, {{10, 10}, {100, 10}}};
    obj.evaluate(ok);
    const std::vector<Point> partial{{50, 50}};
    obj.evaluate_partial(partial);
    CHECK(obj.used() == 2);
    CHECK(rec.curve.size() == 1);
    CHECK(obj.best_layout() == ok);
    obj.evaluate(ok);
    CHECK(obj.exhausted());
    CHECK(obj.evaluate(ok) == -std::numeric_limits<double>::infinity());
    CHECK(obj.used() == 3);

    ImprovementTracker t(5);
    for (int i = 0; i < 5; ++i) t.push(10.0);
    CHECK(std::isinf(t.rate()));
    t.push(10.0);
    CHECK(t.rate() == 0.0);
    t.push(11.0);
    CHECK(t.rate() == doctest::Approx(0.1));
  }
}

TEST_SUITE("discrete") {
  TEST_CASE("grid encode / decode") {
    const auto grid = GridSpec::for_farm(200.0);
    CHECK(grid.per_side == 5);
    CHECK(decode(Genome(grid.cells(), 0), grid).empty());

    Genome g(grid.cells(), 0);
    g[grid.cell(0, 0)] = 1;
    g[grid.cell(0, 1)] = 1;
    const auto l = decode(g, grid);
    REQUIRE(l.size() == 2);
    CHECK(l.positions[0] == Point{0, 0});
    CHECK(l.positions[1] == Point{0, 50});
    CHECK(distance(l.positions[0], l.positions[1]) == 50.0);
    CHECK(is_feasible(l));

    const auto big = GridSpec::for_farm(farm_side(16));
    for (int seed = 0; seed < 100; ++seed) {
      Rng rng(static_cast<std::uint64_t>(seed));
      const auto genome = random_genome(big.cells(), 16, rng);
      const auto layout = decode(genome, big);
      CHECK(is_feasible(layout));
      CHECK(encode(layout, big) == genome);
    }
    CHECK_THROWS_AS(encode(Layout{200, {{10, 0}}}, grid), Error);
    CHECK_THROWS_AS(GridSpec::for_farm(200, 40), Error);
  }

  TEST_CASE("bDE mutant") {
    CHECK(bde_mutant({1, 0, 1}, {1, 1, 0}, {0, 1, 1}) == Genome{0, 1, 1});
    CHECK(bde_mutant({1, 0, 1, 1}, {1, 0, 1, 1}, {0, 1, 0, 1}) == Genome{0, 1, 0, 1});
    CHECK(bde_mutant({1, 1, 1}, {0, 0, 0}, {0, 0, 0}) == Genome{1, 1, 1});
  }

  TEST_CASE("binomial crossover extremes") {
    Rng rng(3);
    const Genome parent{0, 0, 0, 0, 0, 0, 0, 0};
    const Genome mutant{1, 1, 1, 1, 1, 1, 1, 1};
    for (int t = 0; t < 50; ++t) {
      const auto zero = binomial_crossover(parent, mutant, 0.0, rng);
      CHECK(popcount(zero) == 1);
      CHECK(binomial_crossover(parent, mutant, 1.0, rng) == mutant);
    }
  }

  TEST_CASE("V-shaped transfer") {
    CHECK(bpso_transfer(0.0) == 0.0);
    CHECK(std::abs(bpso_transfer(2.0 / std::numbers::pi) - 0.5) <= 1e-12);
    CHECK(bpso_transfer(1e12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(bpso_transfer(1e12) < 1.0);
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
      const double v = uniform(rng, -10.0, 10.0);
      CHECK(bpso_transfer(v) == bpso_transfer(-v));
    }
  }

  TEST_CASE("bPSO flips") {
    Rng rng(2);
    Genome g{1, 0, 1, 0, 0, 1};
    const Genome before = g;
    const std::vector<double> still(6, 0.0);
    bpso_flip(g, still, rng);
    CHECK(g == before);
    const std::vector<double> huge(6, 1e300);
    bpso_flip(g, huge, rng);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(g[k] == 1 - before[k]);
  }

  TEST_CASE("inertia schedule") {
    DiscreteParams p;
    CHECK(pso_inertia(0, 11, p) == 2.0);
    CHECK(pso_inertia(10, 11, p) == 1.5);
    p.inertia_clamp = true;
    CHECK(pso_inertia(0, 11, p) == 0.9);
  }

  TEST_CASE("crossover and mutation keep the popcount") {
    Rng rng(4);
    Genome a = random_genome(100, 16, rng);
    Genome same = a;
    Genome b = a;
    two_point_crossover(a, b, rng);
    CHECK(a == same);
    CHECK(b == same);
    for (int t = 0; t < 1000; ++t) {
      Genome x = random_genome(100, 16, rng);
      Genome y = random_genome(100, 16, rng);
      two_point_crossover(x, y, rng);
      correct_popcount(x, 16, rng);
      correct_popcount(y, 16, rng);
      move_mutation(x, 0.3, rng);
      CHECK(popcount(x) == 16);
      CHECK(popcount(y) == 16);
    }
  }

  TEST_CASE("generation steps are elitist and keep popcounts") {
    const Problem p = farm_problem(testing::two_state_evaluator(), 16);
    const auto grid = GridSpec::for_farm(p.side);
    OptimizerParams params;
    for (const auto variant : {BinaryVariant::bga, BinaryVariant::bde, BinaryVariant::bpso}) {
      Rng rng(9);
      RunRecord rec;
      Objective obj(p, 100000, rec);
      const GenomeFitness fit = [&](const Genome& g, std::span<const std::uint8_t>) {
        return obj.evaluate(decode(g, grid));
      };
      Population pop;
      pop.ones = 16;
      for (int i = 0; i < 12; ++i) {
        pop.genomes.push_back(random_genome(grid.cells(), 16, rng));
        pop.fitness.push_back(fit(pop.genomes.back(), {}));
      }
      BinaryEngine engine(variant, params, 10);
      double best = pop.fitness[pop.best_index()];
      double archive = obj.best();
      for (int gen = 0; gen < 10; ++gen) {
        engine.step(pop, fit, rng);
        CHECK(pop.genomes.size() == 12);
        for (const auto& g : pop.genomes) CHECK(popcount(g) == 16);
        if (variant != BinaryVariant::bpso) {
          CHECK(pop.fitness[pop.best_index()] >= best);
          best = pop.fitness[pop.best_index()];
        }
        CHECK(obj.best() >= archive);
        archive = obj.best();
      }
    }
  }

  TEST_CASE("DLS moves") {
    Rng rng(5);
    DiscreteParams params;
    Layout l{500.0, {{100, 100}, {300, 300}, {200, 400}}};
    CHECK(dls_move(l, 50.0, DlsVariant::one_cell, 0.0, params, rng) == l);
    for (int t = 0; t < 300; ++t) {
      const auto m = dls_move(l, 50.0, DlsVariant::one_cell, 1.0 / 3.0, params, rng);
      CHECK(is_feasible(m));
      for (std::size_t b = 0; b < l.size(); ++b) {
        const double cheb = std::max(std::abs(m.positions[b].x - l.positions[b].x),
                                     std::abs(m.positions[b].y - l.positions[b].y)) / 50.0;
        CHECK((cheb == 0.0 || cheb == 1.0));
      }
      const auto n = dls_move(l, 50.0, DlsVariant::normal_cells, 1.0 / 3.0, params, rng);
      CHECK(is_feasible(n));
    }
  }

  TEST_CASE("DLS-II starts from the best of its initial population") {
    const Problem p = farm_problem(testing::two_state_evaluator(), 9);
    OptimizerParams params;
    Rng rng(12);
    const auto run = dls(p, Budget{12}, params, rng, DlsVariant::normal_cells);
    REQUIRE(run.curve.size() == 12);
    double top = -1.0;
    for (const auto& c : run.curve) top = std::max(top, c.best);
    CHECK(run.best_power == top);

    Rng r2(12);
    const auto longer = dls(p, Budget{120}, params, r2, DlsVariant::normal_cells);
    CHECK(longer.curve[11].best == top);
    CHECK(testing::non_decreasing(longer));
    for (std::size_t i = 12; i < longer.curve.size(); ++i) CHECK(longer.curve[i].stage == Stage::dls);
  }

  TEST_CASE("binary runs on the farm") {
    const Problem p = farm_problem(testing::two_state_evaluator(), 9);
    OptimizerParams params;
    for (const auto variant : {BinaryVariant::bga, BinaryVariant::bde, BinaryVariant::bpso}) {
      Rng rng(2);
      const auto run = binary_run(p, Budget{120}, params, rng, variant);
      CHECK(run.evaluations == 120);
      CHECK(testing::non_decreasing(run));
      CHECK(is_feasible(run.best_layout));
      CHECK(run.skipped == 0);
    }
  }
}
