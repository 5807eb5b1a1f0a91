#pragma once

#include <string>
#include <vector>

#include "biphoton/grid.hpp"
#include "biphoton/spectrum.hpp"

namespace biphoton {

/// Pump envelope g(omega_1 + omega_2), evaluated on the summed detuning
/// nu_1 + nu_2 = omega_1 + omega_2 - 2 Omega.
struct PumpEnvelope {
  enum class Kind { constant, gaussian };

  Kind kind = Kind::constant;
  double sigma_p = 0.0;  // pump bandwidth; only meaningful for gaussian

  static PumpEnvelope constant() noexcept { return {}; }
  static PumpEnvelope gaussian(double sigma_p);

  double operator()(double summed_detuning) const noexcept;
};

struct GaussianPairModel {
  double center = 0.0;  // Omega
  double sigma = 1.0;   // single-photon bandwidth
  PumpEnvelope pump{};
};

/// A model spectrum plus any advisory notes about how well the grid
/// represents it (truncation, under-resolution).
struct ModelSpectrum {
  BiphotonSpectrum spectrum;
  std::vector<std::string> warnings;
};

/// Grid centered on `center` spanning +-span_sigmas * sigma.
FrequencyGrid model_grid(double center, double sigma, double span_sigmas = 6.0,
                         std::size_t n_points = 257);

/// g(nu_1 + nu_2) exp(-(nu_1^2 + nu_2^2) / (2 sigma^2)), normalized.
ModelSpectrum gaussian_pair_spectrum(const GaussianPairModel& m, const FrequencyGrid& grid);

/// (1/2)(1 - exp(-(sigma dz / c)^2 / 2)). Holds for any pump envelope.
double hom_dip_closed(double sigma, double dz, double c_light = 1.0);

/// Signal beam split over a short and a long path, recombined before the
/// splitter; idler on a single path. Derived quantities are never stored.
struct ShihModel {
  double center = 0.0;   // Omega
  double sigma = 1.0;    // single-photon bandwidth
  double sigma_p = 0.1;  // pump bandwidth
  double short_path = 0.0;
  double long_path = 0.0;
  double idler_path = 0.0;
  double c_light = 1.0;

  /// Paths chosen so that delta_L() == delta_l and delta_z() == dz.
  static ShihModel with_offsets(double center, double sigma, double sigma_p, double delta_l,
                                double dz, double c_light = 1.0);

  double delta_L() const noexcept { return 0.5 * (long_path - short_path); }
  double signal_path() const noexcept { return 0.5 * (long_path + short_path); }
  double delta_z() const noexcept { return signal_path() - idler_path; }
  double beta() const noexcept { return sigma_p / sigma; }
  double wavelength() const noexcept;
  /// 4 delta_L / lambda; odd integers give the anti-coalescence peak.
  double path_ratio() const noexcept;

  /// Same model with the idler path moved so that delta_z() == dz.
  ShihModel with_delay(double dz) const noexcept;
  ShihModel with_delta_L(double delta_l) const noexcept;

  void validate() const;
};

ModelSpectrum shih_spectrum(const ShihModel& m, const FrequencyGrid& grid);

/// Which normalization factor B to use in the two-path closed form.
///   quarter: B = 1/2 [1 + cos(4 pi dL / lambda) exp(-(1/4) (1+b^2)/(2+b^2) dL^2 (s/c)^2)]
///   unit:    the same with exponent coefficient 1 instead of 1/4, which is
///            the exact norm of the two-path spectrum.
enum class NormFactor { quarter, unit };

double shih_norm_factor(const ShihModel& m, NormFactor form = NormFactor::quarter);

/// B measured directly on a grid: norm of the two-path spectrum over the norm
/// of the same spectrum without the path-interference factor.
double shih_norm_factor_numeric(const ShihModel& m, const FrequencyGrid& grid);

/// Two-path coincidence probability in closed form at delay dz = z1 - z2
/// (the model's own idler path is ignored).
double shih_exact(const ShihModel& m, double dz, NormFactor form = NormFactor::quarter);

/// Large-delta_L, narrow-pump limit of shih_exact.
double shih_reduced(const ShihModel& m, double dz);

/// Notes on how far the model is from the regime shih_reduced assumes.
std::vector<std::string> shih_reduced_regime_notes(const ShihModel& m);

/// Smallest 2^k + 1 point count (at least `minimum`) whose spacing resolves
/// the pump bandwidth and the path-interference fringes out to |dz| = max_abs_dz.
std::size_t shih_recommended_points(const ShihModel& m, double max_abs_dz,
                                    double span_sigmas = 6.0, std::size_t minimum = 257);

enum class PathParity { even, odd };

/// Monochromatic-pump limit: support only on the antidiagonal nu_2 = -nu_1,
/// amplitude exp(-nu^2/sigma^2) cos(nu dL / c) for even parity or
/// sin(nu dL / c) for odd parity. The grid must be centered on `center`.
ModelSpectrum delta_pump_spectrum(double sigma, double center, double delta_l, PathParity parity,
                                  const FrequencyGrid& grid, double c_light = 1.0);

/// (|w_a, w_b> - |w_b, w_a>) / sqrt(2), frequencies snapped to the nearest
/// grid cells. Throws DegenerateSpectrum when both snap to the same cell.
ModelSpectrum bell_antisymmetric_spectrum(double omega_a, double omega_b,
                                          const FrequencyGrid& grid);

}  // namespace biphoton
