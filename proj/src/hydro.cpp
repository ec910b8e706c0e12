#include "wecfarm/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "shortest.hpp"
#include "wecfarm/error.hpp"
#include "wecfarm/evaluator.hpp"
#include "wecfarm/special.hpp"

namespace wecfarm {
namespace {

constexpr double kConditionLimit = 1e12;

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::invalid_argument, message);
}

std::size_t parse_dof(const std::string& text, std::size_t line_no) {
  if (text == "surge" || text == "0") return 0;
  if (text == "sway" || text == "1") return 1;
  if (text == "heave" || text == "2") return 2;
  throw Error(ErrorCode::parse_error,
              "hydro table line " + std::to_string(line_no) + ": unknown dof '" + text + "'");
}

}  // namespace

std::string_view dof_name(std::size_t dof) {
  static constexpr std::array<std::string_view, kDofs> names{"surge", "sway", "heave"};
  return dof < kDofs ? names[dof] : "unknown";
}

void HydroTable::validate() const {
  const std::size_t n = frequencies.size();
  require(n >= 2, "hydro table needs at least two frequencies");
  for (std::size_t i = 0; i < n; ++i) {
    require(frequencies[i] > 0.0 && std::isfinite(frequencies[i]),
            "hydro table frequencies must be positive");
    if (i > 0) require(frequencies[i] > frequencies[i - 1], "hydro table frequencies must increase");
  }
  for (std::size_t d = 0; d < kDofs; ++d) {
    require(added_mass[d].size() == n && damping[d].size() == n && excitation[d].size() == n,
            "hydro table arrays must match the frequency count");
    for (std::size_t i = 0; i < n; ++i) {
      require(damping[d][i] >= 0.0, "hydro table damping must be non-negative");
      require(std::isfinite(added_mass[d][i]) && std::isfinite(excitation[d][i]),
              "hydro table values must be finite");
    }
  }
}

HydroCoefficients HydroTable::at(double omega) const {
  if (!(omega >= frequencies.front() && omega <= frequencies.back())) {
    std::ostringstream msg;
    msg << "frequency " << omega << " rad/s outside hydro table range [" << frequencies.front()
        << ", " << frequencies.back() << "]";
    throw Error(ErrorCode::extrapolation_refused, msg.str());
  }
  auto upper = std::upper_bound(frequencies.begin(), frequencies.end(), omega);
  std::size_t hi = static_cast<std::size_t>(upper - frequencies.begin());
  if (hi >= frequencies.size()) hi = frequencies.size() - 1;
  const std::size_t lo = hi - 1;
  const double t = (omega - frequencies[lo]) / (frequencies[hi] - frequencies[lo]);
  auto lerp = [&](const std::vector<double>& v) { return v[lo] + t * (v[hi] - v[lo]); };
  HydroCoefficients c;
  for (std::size_t d = 0; d < kDofs; ++d) {
    c.added_mass[d] = lerp(added_mass[d]);
    c.damping[d] = lerp(damping[d]);
    c.excitation[d] = lerp(excitation[d]);
  }
  return c;
}

void BuoySpec::validate() const {
  require(radius > 0.0, "buoy radius must be positive");
  require(mass > 0.0, "buoy mass must be positive");
  require(submergence_depth >= 0.0, "buoy submergence must be non-negative");
  for (std::size_t d = 0; d < kDofs; ++d) {
    require(pto_damping[d] >= 0.0, "PTO damping must be non-negative");
    require(std::isfinite(pto_stiffness[d]), "PTO stiffness must be finite");
  }
}

HydroTable default_hydro_table(const BuoySpec& buoy, double omega_min, double omega_max,
                               std::size_t samples) {
  require(samples >= 2 && omega_min > 0.0 && omega_max > omega_min, "bad default table grid");
  const double a = buoy.radius;
  const double volume = 4.0 / 3.0 * std::numbers::pi * a * a * a;
  const double added = 2.0 / 3.0 * std::numbers::pi * kWaterDensity * a * a * a;
  HydroTable table;
  for (std::size_t i = 0; i < samples; ++i) {
    const double omega =
        omega_min + (omega_max - omega_min) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double k = wave_number(omega);
    const double f = (kWaterDensity * volume + added) * kGravity * k *
                     std::exp(-k * buoy.submergence_depth);
    const double b = k * omega * f * f / (2.0 * kWaterDensity * kGravity * kGravity);
    table.frequencies.push_back(omega);
    for (std::size_t d = 0; d < kDofs; ++d) {
      table.added_mass[d].push_back(added);
      table.damping[d].push_back(b);
      table.excitation[d].push_back(f);
    }
  }
  table.validate();
  return table;
}

BuoySpec tuned_buoy_spec(const HydroTable& table, double omega, BuoySpec base) {
  const HydroCoefficients c = table.at(omega);
  for (std::size_t d = 0; d < kDofs; ++d) {
    base.pto_stiffness[d] = omega * omega * (base.mass + c.added_mass[d]);
    base.pto_damping[d] = c.damping[d];
  }
  base.validate();
  return base;
}

HydroTable parse_hydro_table_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  // omega -> per-dof (A, B, f); every omega must carry all three DOFs
  std::map<double, std::array<std::array<double, 3>, kDofs>> rows;
  std::map<double, std::array<bool, kDofs>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      field.erase(std::remove_if(field.begin(), field.end(),
                                 [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; }),
                  field.end());
      fields.push_back(field);
    }
    if (!header_seen) {
      const std::vector<std::string> expected{"omega", "dof", "added_mass", "damping", "excitation"};
      if (fields != expected) {
        throw Error(ErrorCode::parse_error,
                    "hydro table line " + std::to_string(line_no) +
                        ": expected header omega,dof,added_mass,damping,excitation");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) {
      throw Error(ErrorCode::parse_error,
                  "hydro table line " + std::to_string(line_no) + ": expected 5 fields");
    }
    double values[5] = {};
    for (std::size_t k : {0u, 2u, 3u, 4u}) {
      std::size_t used = 0;
      try {
        values[k] = std::stod(fields[k], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (fields[k].empty() || used != fields[k].size()) {
        throw Error(ErrorCode::parse_error, "hydro table line " + std::to_string(line_no) +
                                                ": malformed number '" + fields[k] + "'");
      }
    }
    const std::size_t dof = parse_dof(fields[1], line_no);
    rows[values[0]][dof] = {values[2], values[3], values[4]};
    seen[values[0]][dof] = true;
  }
  if (!header_seen) throw Error(ErrorCode::parse_error, "hydro table: missing header");
  HydroTable table;
  for (const auto& [omega, per_dof] : rows) {
    for (std::size_t d = 0; d < kDofs; ++d) {
      if (!seen[omega][d]) {
        std::ostringstream msg;
        msg << "hydro table: frequency " << omega << " lacks dof " << dof_name(d);
        throw Error(ErrorCode::parse_error, msg.str());
      }
    }
    table.frequencies.push_back(omega);
    for (std::size_t d = 0; d < kDofs; ++d) {
      table.added_mass[d].push_back(per_dof[d][0]);
      table.damping[d].push_back(per_dof[d][1]);
      table.excitation[d].push_back(per_dof[d][2]);
    }
  }
  table.validate();
  return table;
}

HydroTable read_hydro_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open hydro table " + path.string());
  return parse_hydro_table_csv(in);
}

void write_hydro_table_csv(std::ostream& out, const HydroTable& table) {
  using detail::shortest;
  out << "omega,dof,added_mass,damping,excitation\n";
  for (std::size_t i = 0; i < table.frequencies.size(); ++i) {
    for (std::size_t d = 0; d < kDofs; ++d) {
      out << shortest(table.frequencies[i]) << ',' << dof_name(d) << ','
          << shortest(table.added_mass[d][i]) << ',' << shortest(table.damping[d][i]) << ','
          << shortest(table.excitation[d][i]) << '\n';
    }
  }
}

CouplingKernel bessel_coupling() {
  return [](double kd) { return bessel_j0(kd); };
}

CouplingKernel no_coupling() {
  return [](double) { return 0.0; };
}

HydroModel default_hydro_model(const WaveClimate& climate) {
  HydroModel model;
  model.table = default_hydro_table(model.buoy);
  model.buoy = tuned_buoy_spec(model.table, climate.modal_frequency(), model.buoy);
  return model;
}

ComplexMatrix FarmSystem::impedance(double omega) const {
  const std::size_t n = dimension();
  ComplexMatrix z(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double re = -omega * omega * (mass(i, j) + added_mass(i, j)) + pto_stiffness(i, j);
      const double im = omega * (damping(i, j) + pto_damping(i, j));
      z(i, j) = cplx(re, im);
    }
  }
  return z;
}

FarmSystem assemble_farm_system(std::span<const Point> positions, const HydroModel& model,
                                double omega, double beta) {
  if (positions.empty()) throw Error(ErrorCode::invalid_layout, "layout has no buoys");
  if (!all_finite(positions)) throw Error(ErrorCode::invalid_layout, "non-finite buoy position");
  const HydroCoefficients c = model.table.at(omega);
  const std::size_t n = positions.size();
  const std::size_t dim = 3 * n;
  const double k = wave_number(omega);

  FarmSystem sys;
  sys.buoys = n;
  sys.mass = RealMatrix(dim);
  sys.added_mass = RealMatrix(dim);
  sys.damping = RealMatrix(dim);
  sys.pto_stiffness = RealMatrix(dim);
  sys.pto_damping = RealMatrix(dim);
  sys.excitation.resize(dim);
  for (std::size_t b = 0; b < n; ++b) {
    const double phase = k * (positions[b].x * std::cos(beta) + positions[b].y * std::sin(beta));
    const cplx wave(std::cos(phase), std::sin(phase));
    for (std::size_t d = 0; d < kDofs; ++d) {
      const std::size_t i = 3 * b + d;
      sys.mass(i, i) = model.buoy.mass;
      sys.added_mass(i, i) = c.added_mass[d];
      sys.damping(i, i) = c.damping[d];
      sys.pto_stiffness(i, i) = model.buoy.pto_stiffness[d];
      sys.pto_damping(i, i) = model.buoy.pto_damping[d];
      sys.excitation[i] = c.excitation[d] * wave;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double kernel = model.coupling(k * distance(positions[a], positions[b]));
      for (std::size_t d = 0; d < kDofs; ++d) {
        const double v = c.damping[d] * kernel;
        sys.damping(3 * a + d, 3 * b + d) = v;
        sys.damping(3 * b + d, 3 * a + d) = v;
      }
    }
  }
  return sys;
}

std::vector<cplx> solve_motion(const FarmSystem& system, double omega) {
  ComplexMatrix z = system.impedance(omega);
  const double z_norm = norm1(z);
  ComplexLu lu(std::move(z));
  double condition = std::numeric_limits<double>::infinity();
  if (lu.ok()) condition = z_norm * lu.inverse_norm1_estimate();
  if (!(condition <= kConditionLimit)) {
    std::ostringstream msg;
    msg << "impedance matrix is singular or ill-conditioned at omega = " << omega
        << " rad/s (condition estimate " << condition << ")";
    throw Error(ErrorCode::solver_failure, msg.str());
  }
  return lu.solve(system.excitation);
}

RegularPower power_regular(const FarmSystem& system, std::span<const cplx> displacement,
                           double omega) {
  const std::size_t dim = system.dimension();
  if (displacement.size() != dim) {
    throw Error(ErrorCode::invalid_argument, "displacement vector has the wrong dimension");
  }
  std::vector<cplx> velocity(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::isfinite(displacement[i].real()) || !std::isfinite(displacement[i].imag())) {
      throw Error(ErrorCode::invalid_argument, "non-finite displacement");
    }
    velocity[i] = cplx(0.0, omega) * displacement[i];
  }
  RegularPower power;
  power.per_buoy.assign(system.buoys, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    cplx row(0.0, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = system.pto_damping(i, j);
      if (d != 0.0) row += d * velocity[j];
    }
    power.per_buoy[i / 3] += 0.5 * (std::conj(velocity[i]) * row).real();
  }
  for (double p : power.per_buoy) power.total += p;
  return power;
}

double power_sea_state(std::span<const Point> positions, const HydroModel& model,
                       const SeaState& state) {
  const SpectralGrid& grid = state.grid;
  if (grid.empty() || state.density.size() != grid.n_omega() * grid.n_beta()) {
    throw Error(ErrorCode::invalid_climate, "sea state has an empty spectrum grid");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < grid.n_omega(); ++i) {
    for (std::size_t j = 0; j < grid.n_beta(); ++j) {
      const double s = state.at(i, j);
      if (s == 0.0) continue;
      const FarmSystem sys = assemble_farm_system(positions, model, grid.omegas[i], grid.betas[j]);
      const auto x = solve_motion(sys, grid.omegas[i]);
      total += s * power_regular(sys, x, grid.omegas[i]).total * grid.d_omega * grid.d_beta;
    }
  }
  return total;
}

double annual_power(std::span<const Point> positions, const HydroModel& model,
                    const WaveClimate& climate) {
  return FarmEvaluator(model, climate).annual_power(positions);
}

double annual_power_reference(std::span<const Point> positions, const HydroModel& model,
                              const WaveClimate& climate) {
  climate.validate();
  double total = 0.0;
  for (std::size_t s = 0; s < climate.states.size(); ++s) {
    if (climate.occurrence[s] == 0.0) continue;
    total += climate.occurrence[s] * power_sea_state(positions, model, climate.states[s]);
  }
  return total;
}

double q_factor(std::span<const Point> positions, const HydroModel& model,
                const WaveClimate& climate) {
  return FarmEvaluator(model, climate).q_factor(positions);
}

}  // namespace wecfarm
