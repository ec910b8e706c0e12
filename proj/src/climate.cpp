#include "wecfarm/climate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "shortest.hpp"
#include "wecfarm/error.hpp"

namespace wecfarm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOccurrenceTolerance = 1e-6;

double degrees_to_radians(double deg) { return deg * kPi / 180.0; }
double radians_to_degrees(double rad) { return rad * 180.0 / kPi; }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  return fields;
}

}  // namespace

SpectralGrid SpectralGrid::uniform(std::size_t n_omega, double omega_min, double omega_max,
                                   std::size_t n_beta) {
  if (n_omega == 0 || n_beta == 0 || !(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw Error(ErrorCode::invalid_climate, "spectral grid needs n_omega, n_beta >= 1 and 0 < omega_min < omega_max");
  }
  SpectralGrid g;
  g.d_omega = (omega_max - omega_min) / static_cast<double>(n_omega);
  g.d_beta = 2.0 * kPi / static_cast<double>(n_beta);
  for (std::size_t i = 0; i < n_omega; ++i) {
    g.omegas.push_back(omega_min + (static_cast<double>(i) + 0.5) * g.d_omega);
  }
  for (std::size_t j = 0; j < n_beta; ++j) g.betas.push_back(static_cast<double>(j) * g.d_beta);
  return g;
}

double SeaState::frequency_density(std::size_t i) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.n_beta(); ++j) sum += at(i, j);
  return sum * grid.d_beta;
}

double bretschneider(double omega, double hs, double tp) {
  const double wp = 2.0 * kPi / tp;
  const double ratio = wp / omega;
  const double r4 = ratio * ratio * ratio * ratio;
  return (5.0 / 16.0) * hs * hs * r4 / omega * std::exp(-1.25 * r4);
}

std::vector<double> spreading_function(const SpectralGrid& grid,
                                       const std::vector<DirectionalComponent>& components) {
  if (components.empty()) {
    throw Error(ErrorCode::invalid_climate, "directional spreading needs at least one component");
  }
  double total_weight = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0) || !(c.spread >= 0.0)) {
      throw Error(ErrorCode::invalid_climate, "spreading weights and exponents must be non-negative");
    }
    total_weight += c.weight;
  }
  if (!(total_weight > 0.0)) {
    throw Error(ErrorCode::invalid_climate, "spreading weights sum to zero");
  }
  std::vector<double> d(grid.n_beta(), 0.0);
  std::vector<double> lobe(grid.n_beta());
  for (const auto& c : components) {
    double mass = 0.0;
    for (std::size_t j = 0; j < grid.n_beta(); ++j) {
      lobe[j] = std::pow(std::abs(std::cos(0.5 * (grid.betas[j] - c.beta0))), 2.0 * c.spread);
      mass += lobe[j] * grid.d_beta;
    }
    for (std::size_t j = 0; j < grid.n_beta(); ++j) {
      d[j] += (c.weight / total_weight) * lobe[j] / mass;
    }
  }
  return d;
}

SeaState build_spectrum(double hs, double tp, const std::vector<DirectionalComponent>& directions,
                        const SpectralGrid& grid) {
  if (!(hs > 0.0) || !(tp > 0.0)) {
    throw Error(ErrorCode::invalid_climate, "sea state needs Hs > 0 and Tp > 0");
  }
  if (grid.empty()) throw Error(ErrorCode::invalid_climate, "empty spectral grid");
  std::vector<double> sf(grid.n_omega());
  double energy = 0.0;
  for (std::size_t i = 0; i < grid.n_omega(); ++i) {
    sf[i] = bretschneider(grid.omegas[i], hs, tp);
    energy += sf[i] * grid.d_omega;
  }
  if (!(energy > 0.0)) {
    throw Error(ErrorCode::invalid_climate, "spectrum has no energy on the frequency grid");
  }
  const double scale = hs * hs / 16.0 / energy;
  const std::vector<double> spreading = spreading_function(grid, directions);

  SeaState state;
  state.hs = hs;
  state.tp = tp;
  state.directions = directions;
  state.grid = grid;
  state.density.resize(grid.n_omega() * grid.n_beta());
  for (std::size_t i = 0; i < grid.n_omega(); ++i) {
    for (std::size_t j = 0; j < grid.n_beta(); ++j) {
      state.density[i * grid.n_beta() + j] = sf[i] * scale * spreading[j];
    }
  }
  return state;
}

SeaState build_spectrum(double hs, double tp, double beta0, double spread,
                        const SpectralGrid& grid) {
  return build_spectrum(hs, tp, {DirectionalComponent{beta0, spread, 1.0}}, grid);
}

void WaveClimate::validate() const {
  if (states.empty()) throw Error(ErrorCode::invalid_climate, "climate has no sea states");
  if (states.size() != occurrence.size()) {
    throw Error(ErrorCode::invalid_climate, "climate states and occurrence table differ in length");
  }
  if (grid.empty()) throw Error(ErrorCode::invalid_climate, "climate has an empty spectral grid");
  double sum = 0.0;
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (!(occurrence[s] >= 0.0)) {
      throw Error(ErrorCode::invalid_climate, "negative occurrence probability");
    }
    if (!(states[s].grid == grid)) {
      throw Error(ErrorCode::invalid_climate, "sea states must share the climate grid");
    }
    for (double v : states[s].density) {
      if (!(v >= 0.0)) throw Error(ErrorCode::invalid_climate, "negative spectral density");
    }
    sum += occurrence[s];
  }
  if (std::abs(sum - 1.0) > kOccurrenceTolerance) {
    std::ostringstream msg;
    msg << std::setprecision(10) << "occurrence probabilities sum to " << sum << " (deficit "
        << 1.0 - sum << ")";
    throw Error(ErrorCode::invalid_climate, msg.str());
  }
}

namespace {

std::vector<double> directional_marginal(const WaveClimate& c) {
  std::vector<double> marginal(c.grid.n_beta(), 0.0);
  for (std::size_t s = 0; s < c.states.size(); ++s) {
    for (std::size_t i = 0; i < c.grid.n_omega(); ++i) {
      for (std::size_t j = 0; j < c.grid.n_beta(); ++j) {
        marginal[j] += c.occurrence[s] * c.states[s].at(i, j);
      }
    }
  }
  return marginal;
}

}  // namespace

double WaveClimate::dominant_direction() const {
  validate();
  const auto marginal = directional_marginal(*this);
  const auto it = std::max_element(marginal.begin(), marginal.end());
  return grid.betas[static_cast<std::size_t>(it - marginal.begin())];
}

double WaveClimate::modal_frequency() const {
  validate();
  std::size_t best = 0;
  double best_energy = -1.0;
  for (std::size_t i = 0; i < grid.n_omega(); ++i) {
    double e = 0.0;
    for (std::size_t s = 0; s < states.size(); ++s) e += occurrence[s] * states[s].frequency_density(i);
    if (e > best_energy) {
      best_energy = e;
      best = i;
    }
  }
  return grid.omegas[best];
}

double WaveClimate::directional_spread() const {
  validate();
  const auto marginal = directional_marginal(*this);
  const double total = std::accumulate(marginal.begin(), marginal.end(), 0.0);
  double c = 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j < marginal.size(); ++j) {
    c += marginal[j] * std::cos(grid.betas[j]);
    s += marginal[j] * std::sin(grid.betas[j]);
  }
  const double resultant = std::hypot(c, s) / total;
  return std::sqrt(-2.0 * std::log(std::max(resultant, 1e-300)));
}

Site parse_site(std::string_view name) {
  if (name == "perth_like") return Site::perth_like;
  if (name == "sydney_like") return Site::sydney_like;
  throw Error(ErrorCode::invalid_climate, "unknown synthetic site '" + std::string(name) + "'");
}

std::string_view site_name(Site site) {
  return site == Site::perth_like ? "perth_like" : "sydney_like";
}

WaveClimate synthetic_climate(Site site, const SpectralGrid& grid) {
  // Rows: Hs, columns: Tp. Both sites share the scatter shape so that the
  // contrast between them is the directional spreading.
  const std::vector<double> periods{9.0, 11.0, 13.0};
  const std::vector<std::vector<double>> weights{
      {0.10, 0.12, 0.05}, {0.12, 0.20, 0.10}, {0.05, 0.16, 0.10}};

  WaveClimate climate;
  climate.grid = grid;
  climate.name = std::string(site_name(site));
  std::vector<double> heights;
  std::vector<DirectionalComponent> directions;
  if (site == Site::perth_like) {
    heights = {1.5, 2.5, 3.5};
    directions = {{0.0, 25.0, 1.0}};
  } else {
    heights = {1.25, 2.25, 3.25};
    directions = {{0.0, 2.0, 0.5},
                  {degrees_to_radians(60.0), 2.0, 0.25},
                  {degrees_to_radians(-60.0), 2.0, 0.25}};
  }
  for (std::size_t h = 0; h < heights.size(); ++h) {
    for (std::size_t t = 0; t < periods.size(); ++t) {
      climate.states.push_back(build_spectrum(heights[h], periods[t], directions, grid));
      climate.occurrence.push_back(weights[h][t]);
    }
  }
  climate.validate();
  return climate;
}

WaveClimate parse_climate_csv(std::istream& in, const SpectralGrid& grid) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  WaveClimate climate;
  climate.grid = grid;
  climate.name = "csv";
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      const std::vector<std::string> expected{"hs", "tp", "beta0", "spread", "occurrence"};
      if (fields != expected) {
        throw Error(ErrorCode::parse_error,
                    "climate csv line " + std::to_string(line_no) +
                        ": expected header hs,tp,beta0,spread,occurrence");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) {
      throw Error(ErrorCode::parse_error, "climate csv line " + std::to_string(line_no) +
                                              ": expected 5 fields, got " +
                                              std::to_string(fields.size()));
    }
    double values[5];
    for (std::size_t k = 0; k < 5; ++k) {
      std::size_t used = 0;
      try {
        values[k] = std::stod(fields[k], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != fields[k].size() || fields[k].empty()) {
        throw Error(ErrorCode::parse_error, "climate csv line " + std::to_string(line_no) +
                                                ": malformed number '" + fields[k] + "'");
      }
    }
    try {
      climate.states.push_back(
          build_spectrum(values[0], values[1], degrees_to_radians(values[2]), values[3], grid));
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_error,
                  "climate csv line " + std::to_string(line_no) + ": " + e.what());
    }
    climate.occurrence.push_back(values[4]);
  }
  if (!header_seen) throw Error(ErrorCode::parse_error, "climate csv: missing header");
  climate.validate();
  return climate;
}

WaveClimate load_climate_csv(const std::filesystem::path& path, const SpectralGrid& grid) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open climate file " + path.string());
  return parse_climate_csv(in, grid);
}

void write_climate_csv(std::ostream& out, const WaveClimate& climate) {
  out << "hs,tp,beta0,spread,occurrence\n";
  using detail::shortest;
  for (std::size_t s = 0; s < climate.states.size(); ++s) {
    const auto& state = climate.states[s];
    double total_weight = 0.0;
    for (const auto& c : state.directions) total_weight += c.weight;
    for (const auto& c : state.directions) {
      out << shortest(state.hs) << ',' << shortest(state.tp) << ','
          << shortest(radians_to_degrees(c.beta0)) << ',' << shortest(c.spread) << ','
          << shortest(climate.occurrence[s] * c.weight / total_weight) << '\n';
    }
  }
}

}  // namespace wecfarm
