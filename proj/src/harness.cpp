#include "wecfarm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "wecfarm/error.hpp"
#include "wecfarm/farm.hpp"
#include "wecfarm/opt_continuous.hpp"
#include "wecfarm/opt_discrete.hpp"
#include "wecfarm/opt_hybrid.hpp"
#include "wecfarm/report.hpp"

namespace wecfarm {

using nlohmann::json;

const std::vector<std::string>& algorithm_ids() {
  static const std::vector<std::string> ids{
      "1+1EA", "DE",        "IDE",        "LS-NM",       "bGA",    "bDE",    "bPSO",   "DLS-I",
      "DLS-II", "SLSNM-bGA", "SLSNM-bDE", "SLSNM-bPSO", "MS-bGA", "MS-bDE", "MS-bPSO"};
  return ids;
}

bool is_algorithm(std::string_view id) {
  const auto& ids = algorithm_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

RunRecord run_algorithm(std::string_view id, const Problem& problem, const Budget& budget,
                        const OptimizerParams& params, std::uint64_t seed) {
  Rng rng(seed);
  RunRecord record;
  if (id == "1+1EA") record = one_plus_one_ea(problem, budget, params, rng);
  else if (id == "DE") record = differential_evolution(problem, budget, params, rng, DeVariant::rand1bin);
  else if (id == "IDE") record = differential_evolution(problem, budget, params, rng, DeVariant::best1bin_adaptive);
  else if (id == "LS-NM") record = ls_nm(problem, budget, params, rng);
  else if (id == "bGA") record = binary_run(problem, budget, params, rng, BinaryVariant::bga);
  else if (id == "bDE") record = binary_run(problem, budget, params, rng, BinaryVariant::bde);
  else if (id == "bPSO") record = binary_run(problem, budget, params, rng, BinaryVariant::bpso);
  else if (id == "DLS-I") record = dls(problem, budget, params, rng, DlsVariant::one_cell);
  else if (id == "DLS-II") record = dls(problem, budget, params, rng, DlsVariant::normal_cells);
  else if (id == "SLSNM-bGA") record = slsnm_hybrid_run(problem, budget, params, rng, BinaryVariant::bga);
  else if (id == "SLSNM-bDE") record = slsnm_hybrid_run(problem, budget, params, rng, BinaryVariant::bde);
  else if (id == "SLSNM-bPSO") record = slsnm_hybrid_run(problem, budget, params, rng, BinaryVariant::bpso);
  else if (id == "MS-bGA") record = ms_run(problem, budget, params, rng, BinaryVariant::bga);
  else if (id == "MS-bDE") record = ms_run(problem, budget, params, rng, BinaryVariant::bde);
  else if (id == "MS-bPSO") record = ms_run(problem, budget, params, rng, BinaryVariant::bpso);
  else throw Error(ErrorCode::unknown_algorithm, "unknown algorithm '" + std::string(id) + "'");
  record.algorithm = std::string(id);
  record.seed = seed;
  return record;
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw Error(ErrorCode::invalid_params, "no algorithm selected");
  for (const auto& a : algorithms) {
    if (!is_algorithm(a)) throw Error(ErrorCode::unknown_algorithm, "unknown algorithm '" + a + "'");
  }
  if (seeds.empty()) throw Error(ErrorCode::invalid_params, "seed list is empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw Error(ErrorCode::invalid_params, "seeds must be distinct");
  }
  if (buoys == 0) throw Error(ErrorCode::invalid_params, "buoy count must be positive");
  if (workers == 0) throw Error(ErrorCode::invalid_params, "worker count must be positive");
  budget.validate(1);
}

namespace {

template <typename T>
void read(const json& section, const char* key, T& target) {
  if (!section.contains(key)) return;
  try {
    target = section.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("config key '") + key + "': " + e.what());
  }
}

const json& section(const json& doc, const char* name) {
  static const json empty = json::object();
  if (!doc.contains(name)) return empty;
  const json& s = doc.at(name);
  if (!s.is_object()) throw Error(ErrorCode::parse_error, std::string("config section '") + name + "' is not an object");
  return s;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::parse_error, "config must be a JSON object");

  ExperimentConfig c;
  const json& ex = section(doc, "experiment");
  if (ex.contains("algorithm")) {
    std::string one;
    read(ex, "algorithm", one);
    c.algorithms = {one};
  }
  read(ex, "algorithms", c.algorithms);
  read(ex, "buoys", c.buoys);
  read(ex, "seeds", c.seeds);
  std::string out = c.output_dir.string();
  read(ex, "output_dir", out);
  c.output_dir = resolve(out, base_dir);
  read(ex, "workers", c.workers);
  std::string mode = "per_run";
  read(ex, "friedman_mode", mode);
  if (mode == "per_run") c.friedman = FriedmanMode::per_run;
  else if (mode == "per_mean") c.friedman = FriedmanMode::per_mean;
  else throw Error(ErrorCode::parse_error, "friedman_mode must be per_run or per_mean");

  const json& cl = section(doc, "climate");
  read(cl, "site", c.climate.site);
  std::string csv;
  read(cl, "csv", csv);
  c.climate.csv = resolve(csv, base_dir);
  read(cl, "omegas", c.grid_omegas);
  read(cl, "betas", c.grid_betas);

  const json& hy = section(doc, "hydro");
  std::string table;
  read(hy, "table_csv", table);
  c.hydro_table = resolve(table, base_dir);

  const json& b = section(doc, "budget");
  read(b, "evaluations", c.budget.max_evaluations);
  read(b, "stage1_fraction", c.budget.stage1_fraction);
  read(b, "stage2_fraction", c.budget.stage2_fraction);

  auto& p = c.params;
  const json& ea = section(doc, "ea");
  read(ea, "population", p.ea.population);
  read(ea, "scale", p.ea.scale);
  read(ea, "scale0", p.ea.scale0);
  read(ea, "crossover", p.ea.crossover);
  read(ea, "sigma_fraction", p.ea.sigma_fraction);
  if (ea.contains("mutation_probability")) {
    double m = 0.0;
    read(ea, "mutation_probability", m);
    p.ea.mutation_probability = m;
  }
  const json& ls = section(doc, "ls_nm");
  read(ls, "samples", p.ls_nm.samples);
  read(ls, "sigma", p.ls_nm.sigma);
  read(ls, "simplex_iterations", p.ls_nm.simplex_iterations);
  read(ls, "initial_edge", p.ls_nm.initial_edge);
  const json& cs = section(doc, "cls");
  read(cs, "sigma_start", p.cls.sigma_start);
  read(cs, "sigma_end", p.cls.sigma_end);
  const json& d = section(doc, "discrete");
  read(d, "spacing", p.discrete.spacing);
  read(d, "elite_fraction", p.discrete.elite_fraction);
  read(d, "crossover_rate", p.discrete.crossover_rate);
  read(d, "mutation_rate", p.discrete.mutation_rate);
  read(d, "c1", p.discrete.c1);
  read(d, "c2", p.discrete.c2);
  read(d, "inertia_start", p.discrete.inertia_start);
  read(d, "inertia_end", p.discrete.inertia_end);
  read(d, "inertia_clamp", p.discrete.inertia_clamp);
  read(d, "inertia_min", p.discrete.inertia_min);
  read(d, "inertia_max", p.discrete.inertia_max);
  read(d, "velocity_limit", p.discrete.velocity_limit);
  read(d, "dls_sigma_cells", p.discrete.dls_sigma_cells);
  read(d, "resample_cap", p.discrete.resample_cap);
  const json& h = section(doc, "hybrid");
  read(h, "tile_buoys", p.hybrid.tile_buoys);
  read(h, "sample_radius", p.hybrid.sample_radius);
  read(h, "samples", p.hybrid.samples);
  read(h, "radius_retries", p.hybrid.radius_retries);
  read(h, "simplex_edge", p.hybrid.simplex_edge);
  read(h, "simplex_iterations", p.hybrid.simplex_iterations);
  read(h, "surrogate_cap", p.hybrid.surrogate_cap);
  read(h, "surrogate_fraction", p.hybrid.surrogate_fraction);
  read(h, "stage1_threshold", p.hybrid.stage1_threshold);
  read(h, "stage2_threshold", p.hybrid.stage2_threshold);
  read(h, "window", p.hybrid.window);
  read(h, "rotation", p.hybrid.rotation);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

WaveClimate load_climate(const ClimateSource& source, std::size_t omegas, std::size_t betas) {
  const auto grid = SpectralGrid::uniform(omegas, 0.3, 2.0, betas);
  if (!source.csv.empty()) return load_climate_csv(source.csv, grid);
  return synthetic_climate(parse_site(source.site), grid);
}

std::shared_ptr<const FarmEvaluator> make_evaluator(const ExperimentConfig& config) {
  WaveClimate climate = load_climate(config.climate, config.grid_omegas, config.grid_betas);
  HydroModel model = default_hydro_model(climate);
  if (!config.hydro_table.empty()) {
    model.table = read_hydro_table_csv(config.hydro_table);
    model.buoy = tuned_buoy_spec(model.table, climate.modal_frequency(), model.buoy);
  }
  return std::make_shared<const FarmEvaluator>(std::move(model), std::move(climate));
}

SummaryStats summarize(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "no values to summarise");
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  SummaryStats s;
  s.min = v.front();
  s.max = v.back();
  const std::size_t n = v.size();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  s.median = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  if (n > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

std::vector<double> friedman_ranks(const std::vector<std::vector<double>>& results) {
  const std::size_t k = results.size();
  if (k == 0) throw Error(ErrorCode::invalid_argument, "no algorithms to rank");
  const std::size_t m = results.front().size();
  if (m == 0) throw Error(ErrorCode::invalid_argument, "no instances to rank on");
  for (const auto& row : results) {
    if (row.size() != m) throw Error(ErrorCode::invalid_argument, "ragged result matrix");
  }
  std::vector<double> ranks(k, 0.0);
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < m; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return results[a][i] > results[b][i]; });
    for (std::size_t lo = 0; lo < k;) {
      std::size_t hi = lo + 1;
      while (hi < k && results[order[hi]][i] == results[order[lo]][i]) ++hi;
      const double shared = 0.5 * static_cast<double>(lo + 1 + hi);  // mean of ranks lo+1 .. hi
      for (std::size_t r = lo; r < hi; ++r) ranks[order[r]] += shared;
      lo = hi;
    }
  }
  for (auto& r : ranks) r /= static_cast<double>(m);
  return ranks;
}

namespace {

std::string safe_name(std::string s) {
  for (auto& ch : s) {
    if (ch == '+') ch = 'p';
  }
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, bool write) {
  config.validate();
  const auto evaluator = make_evaluator(config);
  const Problem problem = farm_problem(evaluator, config.buoys);

  struct Job {
    std::size_t algorithm;
    std::size_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (std::size_t s = 0; s < config.seeds.size(); ++s) jobs.push_back({a, s});
  }
  ExperimentResult result;
  result.algorithms.resize(config.algorithms.size());
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    result.algorithms[a].algorithm = config.algorithms[a];
    result.algorithms[a].runs.resize(config.seeds.size());
  }

  std::mutex guard;
  std::size_t next = 0;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      Job job{};
      {
        std::lock_guard lock(guard);
        if (next >= jobs.size() || failure) return;
        job = jobs[next++];
      }
      try {
        auto record = run_algorithm(config.algorithms[job.algorithm], problem, config.budget,
                                    config.params, config.seeds[job.seed]);
        result.algorithms[job.algorithm].runs[job.seed] = std::move(record);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(config.workers, jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::vector<double>> finals;
  for (auto& alg : result.algorithms) {
    std::vector<double> values;
    for (const auto& run : alg.runs) values.push_back(run.best_power);
    alg.stats = summarize(values);
    finals.push_back(values);
  }
  if (finals.size() > 1) {
    if (config.friedman == FriedmanMode::per_mean) {
      std::vector<std::vector<double>> means;
      for (const auto& alg : result.algorithms) means.push_back({alg.stats.mean});
      result.friedman = friedman_ranks(means);
    } else {
      result.friedman = friedman_ranks(finals);
    }
  }

  if (write) {
    namespace fs = std::filesystem;
    const fs::path runs_dir = config.output_dir / "runs";
    fs::create_directories(runs_dir);
    json manifest;
    manifest["buoys"] = config.buoys;
    manifest["farm_side_m"] = problem.side;
    manifest["climate"] = config.climate.csv.empty() ? config.climate.site : config.climate.csv.string();
    manifest["budget"] = config.budget.max_evaluations;
    manifest["seeds"] = config.seeds;
    manifest["algorithms"] = config.algorithms;
    manifest["isolated_power_w"] = evaluator->isolated_power();
    json files = json::array();
    for (const auto& alg : result.algorithms) {
      for (const auto& run : alg.runs) {
        const std::string stem = safe_name(alg.algorithm) + "_seed" + std::to_string(run.seed);
        std::ostringstream curve;
        curve << "evaluation,best,stage\n";
        run.write_curve(curve);
        write_text(runs_dir / (stem + ".curve.csv"), curve.str());
        write_layout(runs_dir / (stem + ".layout.json"), run.best_layout);
        files.push_back("runs/" + stem + ".curve.csv");
        files.push_back("runs/" + stem + ".layout.json");
      }
    }
    write_text(config.output_dir / "results.csv", results_csv(result));
    write_text(config.output_dir / "finals.csv", finals_csv(result));
    files.push_back("results.csv");
    files.push_back("finals.csv");
    if (!result.friedman.empty()) {
      write_text(config.output_dir / "friedman.csv", friedman_csv(result));
      files.push_back("friedman.csv");
    }
    manifest["files"] = files;
    write_text(config.output_dir / "manifest.json", manifest.dump(2) + "\n");
  }
  return result;
}

std::vector<RemovalStep> buoy_removal_analysis(const Layout& layout, const FarmEvaluator& evaluator) {
  std::vector<Point> points = layout.positions;
  std::vector<std::size_t> index(points.size());
  std::iota(index.begin(), index.end(), 0);
  std::vector<RemovalStep> steps;
  while (!points.empty()) {
    const auto r = evaluator.evaluate(points);
    RemovalStep step;
    step.remaining = points.size();
    step.power = r.total;
    step.q = r.total / (static_cast<double>(points.size()) * evaluator.isolated_power());
    if (points.size() > 1) {
      const auto weakest = static_cast<std::size_t>(
          std::min_element(r.per_buoy.begin(), r.per_buoy.end()) - r.per_buoy.begin());
      step.removed = index[weakest];
      points.erase(points.begin() + static_cast<std::ptrdiff_t>(weakest));
      index.erase(index.begin() + static_cast<std::ptrdiff_t>(weakest));
    } else {
      points.clear();
    }
    steps.push_back(step);
  }
  return steps;
}

Landscape landscape_scan(const Layout& fixed, const FarmEvaluator& evaluator, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::invalid_argument, "scan step must be positive");
  if (!(fixed.side > 0.0)) throw Error(ErrorCode::invalid_layout, "farm side must be positive");
  Landscape scan;
  scan.step = step;
  scan.per_side = static_cast<std::size_t>(std::floor(fixed.side / step + 1e-9)) + 1;
  std::vector<Point> points = fixed.positions;
  points.push_back({});
  for (std::size_t i = 0; i < scan.per_side; ++i) {
    for (std::size_t j = 0; j < scan.per_side; ++j) {
      LandscapeNode node;
      node.position = {static_cast<double>(i) * step, static_cast<double>(j) * step};
      node.masked = node.position.x > fixed.side || node.position.y > fixed.side ||
                    std::any_of(fixed.positions.begin(), fixed.positions.end(), [&](const Point& q) {
                      return distance(q, node.position) < kSafetyDistance;
                    });
      if (!node.masked) {
        points.back() = node.position;
        const auto r = evaluator.evaluate(points);
        node.buoy_power = r.per_buoy.back();
        node.total_power = r.total;
      }
      scan.nodes.push_back(node);
    }
  }
  return scan;
}

}  // namespace wecfarm
