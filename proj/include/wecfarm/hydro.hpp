#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "wecfarm/climate.hpp"
#include "wecfarm/layout.hpp"
#include "wecfarm/linalg.hpp"

namespace wecfarm {

inline constexpr double kWaterDensity = 1025.0;  // kg/m^3
inline constexpr double kGravity = 9.81;         // m/s^2
inline constexpr std::size_t kDofs = 3;          // surge, sway, heave

std::string_view dof_name(std::size_t dof);

// Deep-water dispersion k = omega^2 / g.
inline double wave_number(double omega) { return omega * omega / kGravity; }

struct HydroCoefficients {
  std::array<double, kDofs> added_mass{};  // kg
  std::array<double, kDofs> damping{};     // kg/s
  std::array<double, kDofs> excitation{};  // N per metre of wave amplitude
};

// Single-buoy hydrodynamic coefficients sampled on an ascending frequency grid.
struct HydroTable {
  std::vector<double> frequencies;  // rad/s
  std::array<std::vector<double>, kDofs> added_mass;
  std::array<std::vector<double>, kDofs> damping;
  std::array<std::vector<double>, kDofs> excitation;

  // Throws Error(invalid_argument) on a broken invariant.
  void validate() const;
  double min_frequency() const { return frequencies.front(); }
  double max_frequency() const { return frequencies.back(); }
  // Linear interpolation in omega; Error(extrapolation_refused) outside the grid.
  HydroCoefficients at(double omega) const;
};

struct BuoySpec {
  double radius = 5.0;               // m
  double mass = 376e3;               // kg
  double submergence_depth = 7.0;    // m, depth of the centre
  std::array<double, kDofs> pto_stiffness{};  // N/m
  std::array<double, kDofs> pto_damping{};    // kg/s

  void validate() const;
};

// Placeholder coefficients for a deeply submerged sphere:
//   added mass  A = (2/3) pi rho a^3 (every DOF),
//   excitation  f = (rho V + A) g k exp(-k h),
//   damping     B = k omega f^2 / (2 rho g^2)    (deep-water Haskind relation),
// which makes B unimodal in omega with its peak near k a = 1 for the default
// geometry. V is the sphere volume and h the submergence of its centre.
HydroTable default_hydro_table(const BuoySpec& buoy = {}, double omega_min = 0.2,
                               double omega_max = 2.6, std::size_t samples = 49);

// PTO tuned at `omega`: stiffness resonates the buoy, damping matches the
// radiation damping there.
BuoySpec tuned_buoy_spec(const HydroTable& table, double omega, BuoySpec base = {});

// CSV with header `omega,dof,added_mass,damping,excitation`, one row per
// (omega, dof); dof is surge|sway|heave or 0|1|2.
HydroTable parse_hydro_table_csv(std::istream& in);
HydroTable read_hydro_table_csv(const std::filesystem::path& path);
void write_hydro_table_csv(std::ostream& out, const HydroTable& table);

// Off-diagonal damping multiplier as a function of k * distance.
using CouplingKernel = std::function<double(double)>;
CouplingKernel bessel_coupling();
CouplingKernel no_coupling();

struct HydroModel {
  BuoySpec buoy;
  HydroTable table;
  CouplingKernel coupling = bessel_coupling();
};

// Default table, PTO tuned at the climate's modal frequency.
HydroModel default_hydro_model(const WaveClimate& climate);

// Matrices of the coupled equation of motion at one (omega, beta). DOF index
// of buoy b, mode d is 3 b + d.
struct FarmSystem {
  std::size_t buoys = 0;
  RealMatrix mass;
  RealMatrix added_mass;
  RealMatrix damping;
  RealMatrix pto_stiffness;
  RealMatrix pto_damping;
  std::vector<cplx> excitation;

  std::size_t dimension() const noexcept { return 3 * buoys; }
  // Z = -omega^2 (M + A) + i omega (B + D_pto) + K_pto
  ComplexMatrix impedance(double omega) const;
};

FarmSystem assemble_farm_system(std::span<const Point> positions, const HydroModel& model,
                                double omega, double beta);

// Complex displacement amplitudes X with Z X = F_exc. Error(solver_failure)
// when the 1-norm condition estimate of Z exceeds 1e12.
std::vector<cplx> solve_motion(const FarmSystem& system, double omega);

struct RegularPower {
  double total = 0.0;             // W
  std::vector<double> per_buoy;   // W
};

// p = 1/2 Xdot^H D_pto Xdot with Xdot = i omega X.
RegularPower power_regular(const FarmSystem& system, std::span<const cplx> displacement,
                           double omega);

// sum over grid nodes of S p d_omega d_beta, one assemble/solve per node.
double power_sea_state(std::span<const Point> positions, const HydroModel& model,
                       const SeaState& state);

// Objective: sum_s P_s O_s. Computed through FarmEvaluator.
double annual_power(std::span<const Point> positions, const HydroModel& model,
                    const WaveClimate& climate);
// Same quantity through power_sea_state, node by node.
double annual_power_reference(std::span<const Point> positions, const HydroModel& model,
                              const WaveClimate& climate);

double q_factor(std::span<const Point> positions, const HydroModel& model,
                const WaveClimate& climate);

}  // namespace wecfarm
