#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wecfarm/climate.hpp"
#include "wecfarm/error.hpp"
#include "wecfarm/evaluator.hpp"
#include "wecfarm/harness.hpp"
#include "wecfarm/hydro.hpp"
#include "wecfarm/layout.hpp"
#include "wecfarm/report.hpp"

namespace fs = std::filesystem;
using namespace wecfarm;

namespace {

// A climate argument is a CSV path or the name of a synthetic site.
WaveClimate climate_from(const std::string& arg) {
  if (arg == "perth_like" || arg == "sydney_like") return synthetic_climate(parse_site(arg));
  return load_climate_csv(arg);
}

FarmEvaluator evaluator_from(const std::string& climate_arg, const std::string& hydro_csv) {
  WaveClimate climate = climate_from(climate_arg);
  HydroModel model = default_hydro_model(climate);
  if (!hydro_csv.empty()) {
    model.table = read_hydro_table_csv(hydro_csv);
    model.buoy = tuned_buoy_spec(model.table, climate.modal_frequency(), model.buoy);
  }
  return FarmEvaluator(std::move(model), std::move(climate));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << text;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) std::cout << text;
  else write_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-energy farm evaluation and layout optimisation"};
  app.require_subcommand(1);

  std::string layout_path, climate_arg = "perth_like", hydro_csv, out_path, config_path, site;
  double step = 25.0;
  long probe = -1;

  auto* evaluate = app.add_subcommand("evaluate", "Annual power and q-factor of a layout");
  evaluate->add_option("--layout", layout_path, "Layout JSON")->required();
  evaluate->add_option("--climate", climate_arg, "Climate CSV or perth_like|sydney_like")->required();
  evaluate->add_option("--hydro", hydro_csv, "Hydrodynamic table CSV");

  auto* optimize = app.add_subcommand("optimize", "Run the configured optimizer over its seeds");
  optimize->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* benchmark = app.add_subcommand("benchmark", "Run several optimizers and rank them");
  benchmark->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* analyze = app.add_subcommand("analyze", "Layout analyses");
  analyze->require_subcommand(1);
  auto* removal = analyze->add_subcommand("removal", "Drop the weakest buoy repeatedly");
  auto* landscape = analyze->add_subcommand("landscape", "Power map for one buoy moved over the farm");
  for (auto* sub : {removal, landscape}) {
    sub->add_option("--layout", layout_path, "Layout JSON")->required();
    sub->add_option("--climate", climate_arg, "Climate CSV or perth_like|sydney_like");
    sub->add_option("--hydro", hydro_csv, "Hydrodynamic table CSV");
    sub->add_option("--out", out_path, "Output CSV (default stdout)");
  }
  landscape->add_option("--step", step, "Grid step in metres");
  landscape->add_option("--probe", probe, "Index of the buoy to move (default: last)");

  auto* plot = app.add_subcommand("plot", "SVG plot of a layout coloured by buoy power");
  plot->add_option("--layout", layout_path, "Layout JSON")->required();
  plot->add_option("--out", out_path, "Output SVG")->required();
  plot->add_option("--climate", climate_arg, "Climate CSV or perth_like|sydney_like");
  plot->add_option("--hydro", hydro_csv, "Hydrodynamic table CSV");

  auto* export_climate = app.add_subcommand("export-climate", "Write a synthetic climate as CSV");
  export_climate->add_option("--site", site, "perth_like|sydney_like")->required();
  export_climate->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* export_hydro = app.add_subcommand("export-hydro", "Write the default hydrodynamic table as CSV");
  export_hydro->add_option("--out", out_path, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (evaluate->parsed()) {
      const Layout layout = read_layout(layout_path);
      const auto evaluator = evaluator_from(climate_arg, hydro_csv);
      const double power = evaluator.annual_power(layout.positions);
      std::cout << caption(power, evaluator.q_factor(layout.positions)) << '\n';
    } else if (optimize->parsed() || benchmark->parsed()) {
      const ExperimentConfig config = load_config(config_path);
      const ExperimentResult result = run_experiment(config);
      for (const auto& alg : result.algorithms) {
        for (const auto& run : alg.runs) {
          std::cout << alg.algorithm << " seed " << run.seed << ": " << format_number(run.best_power)
                    << " W after " << run.evaluations << " evaluations\n";
        }
      }
      std::cout << results_csv(result);
      if (!result.friedman.empty()) std::cout << friedman_csv(result);
      std::cout << "outputs in " << config.output_dir.string() << '\n';
    } else if (removal->parsed()) {
      const Layout layout = read_layout(layout_path);
      const auto evaluator = evaluator_from(climate_arg, hydro_csv);
      emit(out_path, removal_csv(buoy_removal_analysis(layout, evaluator)));
    } else if (landscape->parsed()) {
      Layout layout = read_layout(layout_path);
      if (layout.empty()) throw Error(ErrorCode::invalid_layout, "landscape needs at least one buoy");
      const auto index = probe < 0 ? layout.size() - 1 : static_cast<std::size_t>(probe);
      if (index >= layout.size()) throw Error(ErrorCode::invalid_argument, "probe index out of range");
      layout.positions.erase(layout.positions.begin() + static_cast<std::ptrdiff_t>(index));
      const auto evaluator = evaluator_from(climate_arg, hydro_csv);
      emit(out_path, landscape_csv(landscape_scan(layout, evaluator, step)));
    } else if (plot->parsed()) {
      const Layout layout = read_layout(layout_path);
      const auto evaluator = evaluator_from(climate_arg, hydro_csv);
      const auto r = evaluator.evaluate(layout.positions);
      const double q = layout.empty() ? 0.0 : evaluator.q_factor(layout.positions);
      write_file(out_path, plot_layout_svg(layout, r.per_buoy, r.total, q));
    } else if (export_climate->parsed()) {
      std::ostringstream out;
      write_climate_csv(out, synthetic_climate(parse_site(site)));
      emit(out_path, out.str());
    } else if (export_hydro->parsed()) {
      std::ostringstream out;
      write_hydro_table_csv(out, default_hydro_table());
      emit(out_path, out.str());
    }
  } catch (const Error& e) {
    std::cerr << "error[" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
