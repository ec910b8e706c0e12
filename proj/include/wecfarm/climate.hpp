#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wecfarm {

// Quadrature nodes shared by every sea state of a climate. Frequencies are bin
// centres; directions start at 0 and cover [0, 2 pi).
struct SpectralGrid {
  std::vector<double> omegas;  // rad/s
  std::vector<double> betas;   // rad, propagation direction
  double d_omega = 0.0;
  double d_beta = 0.0;

  static SpectralGrid uniform(std::size_t n_omega = 20, double omega_min = 0.3,
                              double omega_max = 2.0, std::size_t n_beta = 12);

  std::size_t n_omega() const noexcept { return omegas.size(); }
  std::size_t n_beta() const noexcept { return betas.size(); }
  bool empty() const noexcept { return omegas.empty() || betas.empty(); }

  friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;
};

// One cos^{2s} spreading lobe; the weights of a mixture are normalised on use.
struct DirectionalComponent {
  double beta0 = 0.0;  // rad
  double spread = 25.0;
  double weight = 1.0;
};

struct SeaState {
  double hs = 0.0;  // m
  double tp = 0.0;  // s
  std::vector<DirectionalComponent> directions;
  SpectralGrid grid;
  std::vector<double> density;  // S(omega_i, beta_j), row-major n_omega x n_beta

  double at(std::size_t i, std::size_t j) const { return density[i * grid.n_beta() + j]; }
  // sum_j S(omega_i, beta_j) d_beta
  double frequency_density(std::size_t i) const;
};

struct WaveClimate {
  std::string name;
  SpectralGrid grid;
  std::vector<SeaState> states;
  std::vector<double> occurrence;

  // Throws Error(invalid_climate) when the occurrence table is not a
  // probability distribution (tolerance 1e-6) or the states disagree on grid.
  void validate() const;

  // Probability-weighted modal propagation direction (rad).
  double dominant_direction() const;
  // Frequency node carrying the most probability-weighted energy (rad/s).
  double modal_frequency() const;
  // Circular standard deviation (rad) of the probability-weighted directional
  // distribution.
  double directional_spread() const;
};

// S_f: Bretschneider with omega_p = 2 pi / Tp. Unnormalised.
double bretschneider(double omega, double hs, double tp);

// D(beta_j) on the grid, normalised so that sum_j D_j d_beta = 1.
std::vector<double> spreading_function(const SpectralGrid& grid,
                                       const std::vector<DirectionalComponent>& components);

// S(omega, beta) = S_f(omega) D(beta) where S_f is rescaled so that its
// quadrature over the grid equals Hs^2 / 16 exactly.
SeaState build_spectrum(double hs, double tp, const std::vector<DirectionalComponent>& directions,
                        const SpectralGrid& grid = SpectralGrid::uniform());
SeaState build_spectrum(double hs, double tp, double beta0, double spread,
                        const SpectralGrid& grid = SpectralGrid::uniform());

enum class Site { perth_like, sydney_like };
Site parse_site(std::string_view name);
std::string_view site_name(Site site);

WaveClimate synthetic_climate(Site site, const SpectralGrid& grid = SpectralGrid::uniform());

// CSV with header `hs,tp,beta0,spread,occurrence`; beta0 in degrees.
WaveClimate parse_climate_csv(std::istream& in, const SpectralGrid& grid = SpectralGrid::uniform());
WaveClimate load_climate_csv(const std::filesystem::path& path,
                             const SpectralGrid& grid = SpectralGrid::uniform());
// Mixtures are written as one row per lobe with the occurrence split by lobe
// weight; reading the file back yields the same annual power.
void write_climate_csv(std::ostream& out, const WaveClimate& climate);

}  // namespace wecfarm
