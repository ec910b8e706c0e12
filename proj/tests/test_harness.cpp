#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "wecfarm/error.hpp"
#include "wecfarm/harness.hpp"
#include "wecfarm/report.hpp"

using namespace wecfarm;
namespace fs = std::filesystem;

namespace {

bool well_formed(const std::string& xml) {
  std::istringstream in(xml);
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error&) {
    return false;
  }
  return tree.count("svg") == 1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wecfarm_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::shared_ptr<const FarmEvaluator> decoupled() {
  const auto c = testing::two_state_climate();
  auto model = default_hydro_model(c);
  model.coupling = no_coupling();
  return std::make_shared<const FarmEvaluator>(model, c);
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("summary statistics") {
    const auto one = summarize({3.5});
    CHECK(one.max == 3.5);
    CHECK(one.min == 3.5);
    CHECK(one.mean == 3.5);
    CHECK(one.median == 3.5);
    CHECK(one.std == 0.0);
    const auto s = summarize({6, 2, 4});
    CHECK(s.mean == 4.0);
    CHECK(s.median == 4.0);
    CHECK(s.std == 2.0);
    const auto even = summarize({1, 2, 3, 10});
    CHECK(even.median == 2.5);
    CHECK(even.min <= even.median);
    CHECK(even.median <= even.max);
    CHECK_THROWS_AS(summarize({}), Error);
  }

  TEST_CASE("Friedman ranks") {
    CHECK(friedman_ranks({{5, 6, 7}, {1, 2, 3}}) == std::vector<double>{1.0, 2.0});
    CHECK(friedman_ranks({{4}, {4}, {4}}) == std::vector<double>{2.0, 2.0, 2.0});
    CHECK(friedman_ranks({{5, 1}, {3, 5}, {1, 3}}) == std::vector<double>{2.0, 1.5, 2.5});
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
      const std::size_t k = 2 + pick(rng, 6);
      const std::size_t m = 1 + pick(rng, 8);
      std::vector<std::vector<double>> r(k, std::vector<double>(m));
      for (auto& row : r) {
        for (auto& v : row) v = static_cast<double>(pick(rng, 4));  // plenty of ties
      }
      const auto ranks = friedman_ranks(r);
      double mean = 0.0;
      for (double x : ranks) mean += x / static_cast<double>(k);
      CHECK(mean == doctest::Approx((static_cast<double>(k) + 1.0) / 2.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(friedman_ranks({{1, 2}, {1}}), Error);
  }

  TEST_CASE("config parsing and validation") {
    const auto c = parse_config(R"({"experiment": {"algorithms": ["MS-bDE", "bGA"], "buoys": 9,
      "seeds": [1, 2], "output_dir": "out"}, "budget": {"evaluations": 300},
      "ea": {"population": 10}, "hybrid": {"rotation": false}})",
                                "/base");
    CHECK(c.algorithms.size() == 2);
    CHECK(c.buoys == 9);
    CHECK(c.output_dir == fs::path("/base/out"));
    CHECK(c.params.ea.population == 10);
    CHECK_FALSE(c.params.hybrid.rotation);
    CHECK(c.params.discrete.c1 == 2.0);
    CHECK_NOTHROW(c.validate());

    auto code_of = [](const std::string& text) {
      try {
        parse_config(text).validate();
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::io_error;
    };
    CHECK(code_of(R"({"experiment": {"algorithms": ["CMA-ES"], "seeds": [1]}})") == ErrorCode::unknown_algorithm);
    CHECK(code_of(R"({"experiment": {"algorithms": ["DE"], "seeds": [1]}, "budget": {"evaluations": 0}})") ==
          ErrorCode::invalid_budget);
    CHECK(code_of(R"({"experiment": {"algorithms": ["DE"], "seeds": []}})") == ErrorCode::invalid_params);
    CHECK(code_of(R"({"experiment": {"algorithms": ["DE"], "seeds": [4, 4]}})") == ErrorCode::invalid_params);
    CHECK(code_of("{not json") == ErrorCode::parse_error);
    CHECK(code_of(R"({"experiment": {"algorithms": ["DE"], "seeds": [1], "buoys": "many"}})") ==
          ErrorCode::parse_error);
  }

  TEST_CASE("registry") {
    CHECK(algorithm_ids().size() == 15);
    CHECK(is_algorithm("MS-bPSO"));
    CHECK_FALSE(is_algorithm("CMA-ES"));
    CHECK_THROWS_AS(run_algorithm("CMA-ES", testing::centre_problem(2), Budget{10}, {}, 1), Error);
  }

  TEST_CASE("experiment outputs are reproducible") {
    const auto dir = scratch("experiment");
    const std::string text = R"({"experiment": {"algorithms": ["1+1EA", "bDE", "SLSNM-bGA"], "buoys": 6,
      "seeds": [3, 4], "output_dir": "a", "workers": 2}, "budget": {"evaluations": 120}})";
    auto first = parse_config(text, dir);
    const auto r1 = run_experiment(first);
    auto second = first;
    second.output_dir = dir / "b";
    second.workers = 1;
    run_experiment(second);
    for (const char* f : {"results.csv", "finals.csv", "friedman.csv", "manifest.json",
                          "runs/1p1EA_seed3.curve.csv", "runs/SLSNM-bGA_seed4.layout.json"}) {
      REQUIRE(fs::exists(dir / "a" / f));
      CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    CHECK(slurp(dir / "a" / "results.csv").rfind("statistic,1+1EA,bDE,SLSNM-bGA\nMax,", 0) == 0);

    // Stored layouts re-evaluate to the reported finals.
    const auto ev = make_evaluator(first);
    for (const auto& alg : r1.algorithms) {
      for (const auto& run : alg.runs) {
        const std::string stem = (alg.algorithm == "1+1EA" ? "1p1EA" : alg.algorithm) + "_seed" +
                                 std::to_string(run.seed);
        const auto layout = read_layout(dir / "a" / "runs" / (stem + ".layout.json"));
        CHECK(is_feasible(layout));
        CHECK(ev->annual_power(layout.positions) == doctest::Approx(run.best_power).epsilon(1e-9));
      }
    }
    fs::remove_all(dir);
  }

  TEST_CASE("buoy removal") {
    const auto ev = testing::two_state_evaluator();
    const Layout single{300, {{100, 100}}};
    const auto one = buoy_removal_analysis(single, *ev);
    REQUIRE(one.size() == 1);
    CHECK(one[0].q == 1.0);
    CHECK_FALSE(one[0].removed.has_value());

    const auto dec = decoupled();
    const Layout four{400, {{0, 0}, {80, 0}, {0, 80}, {80, 80}}};
    const auto lin = buoy_removal_analysis(four, *dec);
    REQUIRE(lin.size() == 4);
    for (std::size_t i = 1; i < lin.size(); ++i) {
      CHECK(lin[i - 1].power - lin[i].power == doctest::Approx(dec->isolated_power()).epsilon(1e-10));
    }

    // Recompute from scratch: drop the weakest buoy each time.
    Rng rng(2);
    const Layout nine = random_feasible_layout(9, farm_side(9), rng);
    const auto steps = buoy_removal_analysis(nine, *ev);
    REQUIRE(steps.size() == 9);
    std::vector<Point> pts = nine.positions;
    std::vector<std::size_t> ids{0, 1, 2, 3, 4, 5, 6, 7, 8};
    for (const auto& s : steps) {
      CHECK(s.remaining == pts.size());
      const auto r = ev->evaluate(pts);
      CHECK(s.power == doctest::Approx(r.total).epsilon(1e-12));
      if (pts.size() == 1) break;
      std::size_t w = 0;
      for (std::size_t i = 1; i < pts.size(); ++i) {
        if (r.per_buoy[i] < r.per_buoy[w]) w = i;
      }
      CHECK(*s.removed == ids[w]);
      pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(w));
      ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(w));
    }
  }

  TEST_CASE("power landscape") {
    const auto ev = testing::two_state_evaluator();
    const auto empty = landscape_scan(Layout{200, {}}, *ev, 25.0);
    CHECK(empty.per_side == 9);
    CHECK(std::none_of(empty.nodes.begin(), empty.nodes.end(), [](const auto& n) { return n.masked; }));
    for (const auto& n : empty.nodes) CHECK(n.buoy_power == doctest::Approx(ev->isolated_power()).epsilon(1e-12));

    const Layout fixed{200, {{49, 0}, {150, 150}}};
    const auto scan = landscape_scan(fixed, *ev, 25.0);
    const auto& origin = scan.nodes[0];
    CHECK(origin.position == Point{0, 0});
    CHECK(origin.masked);  // 49 m from the first buoy
    double top = -1.0;
    for (const auto& n : scan.nodes) {
      if (n.masked) continue;
      for (const auto& q : fixed.positions) CHECK(distance(q, n.position) >= 50.0);
      top = std::max(top, n.total_power);
    }
    for (const auto& n : scan.nodes) {
      if (!n.masked) CHECK(top >= n.total_power);
    }
    const auto csv = landscape_csv(scan);
    CHECK(csv.rfind("x,y,masked,buoy_power,total_power\n0.000000,0.000000,1,,\n", 0) == 0);
  }

  TEST_CASE("SVG plots") {
    const std::string blank = plot_layout_svg(Layout{300, {}}, {}, 0.0, 0.0);
    CHECK(well_formed(blank));
    CHECK(blank.find("<circle") == std::string::npos);
    CHECK(blank.find("<rect") != std::string::npos);

    const Layout l{300, {{0, 0}, {100, 0}, {200, 200}}};
    const std::vector<double> same{5, 5, 5};
    const auto svg = plot_layout_svg(l, same, 15.0, 1.0);
    CHECK(well_formed(svg));
    std::set<std::string> fills;
    for (std::size_t pos = svg.find("fill=\"#"); pos != std::string::npos; pos = svg.find("fill=\"#", pos + 1)) {
      fills.insert(svg.substr(pos, 14));
    }
    CHECK(fills.size() == 1);
    CHECK(svg.find("Power=15.000000 (Watt), q-factor=1.000000") != std::string::npos);

    const auto ev = testing::two_state_evaluator();
    const auto r = ev->evaluate(l.positions);
    CHECK(well_formed(plot_layout_svg(l, r.per_buoy, r.total, ev->q_factor(l.positions))));

    CHECK(power_colour(0, 0, 1) == "#0000ff");
    CHECK(power_colour(1, 0, 1) == "#ff0000");
    CHECK(power_colour(3, 3, 3) == "#80007f");  // t = 0.5 rounds red up
  }
}
