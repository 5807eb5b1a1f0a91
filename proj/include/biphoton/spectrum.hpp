#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "biphoton/grid.hpp"
#include "biphoton/matrix.hpp"

namespace biphoton {

/// Discretized joint spectral amplitude of a photon pair.
///
/// Entry (i, j) is the amplitude for photon 1 at grid frequency i and
/// photon 2 at grid frequency j, with the grid spacing absorbed so that
/// integrals over the spectrum become plain sums. Instances always carry
/// unit norm: sum |c_ij|^2 = 1.
class BiphotonSpectrum {
 public:
  /// Samples f(omega_1, omega_2) on every grid cell and normalizes.
  /// Throws DegenerateSpectrum when the samples are all zero or not finite.
  static BiphotonSpectrum from_function(const FrequencyGrid& grid,
                                        const std::function<cplx(double, double)>& f);

  /// Takes ownership of raw amplitudes and normalizes them.
  static BiphotonSpectrum from_amplitudes(const FrequencyGrid& grid, ComplexMatrix amplitudes);

  /// Accepts amplitudes that are already unit norm (to 1e-10) without
  /// rescaling them.
  static BiphotonSpectrum from_unit_amplitudes(const FrequencyGrid& grid,
                                               ComplexMatrix amplitudes);

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }
  const ComplexMatrix& amplitudes() const noexcept { return amplitudes_; }
  cplx operator()(std::size_t i, std::size_t j) const noexcept { return amplitudes_(i, j); }

  double norm2() const { return frobenius_norm2(amplitudes_); }

 private:
  BiphotonSpectrum(FrequencyGrid grid, ComplexMatrix amplitudes)
      : grid_(grid), amplitudes_(std::move(amplitudes)) {}

  FrequencyGrid grid_;
  ComplexMatrix amplitudes_;
};

/// Exchanges the roles of the two photons: c'_ij = c_ji.
BiphotonSpectrum swap_photons(const BiphotonSpectrum& s);

struct SymmetryParts {
  std::optional<BiphotonSpectrum> symmetric;      // (c + c^T)/2, renormalized
  std::optional<BiphotonSpectrum> antisymmetric;  // (c - c^T)/2, renormalized
  double w_sym = 0.0;
  double w_antisym = 0.0;
};

/// Splits a spectrum into its exchange-symmetric and antisymmetric parts.
/// A part whose weight is below 1e-24 is reported as empty.
SymmetryParts symmetry_decompose(const BiphotonSpectrum& s);

/// Weight of the antisymmetric part, sum |c - c^T|^2 / 4.
double antisymmetric_weight(const BiphotonSpectrum& s);

/// Multiplies by the propagation phase exp(i (omega_1 z1 + omega_2 z2) / c_light).
BiphotonSpectrum apply_path_delays(const BiphotonSpectrum& s, double z1, double z2,
                                   double c_light = 1.0);

/// V = Re sum conj(c_ij) c_ji, the overlap of the state with its exchanged copy.
double exchange_overlap(const BiphotonSpectrum& s);

/// Largest squared singular value over the squared Frobenius norm. Equal to 1
/// exactly for product (un-entangled) spectra.
double separability_rank1_fraction(const BiphotonSpectrum& s);

/// Leading Schmidt pair: c ~ sqrt(lambda) u v^T with unit u, v.
struct SchmidtPair {
  double weight;  // largest squared singular value
  std::vector<cplx> photon1;
  std::vector<cplx> photon2;
};
SchmidtPair leading_schmidt_pair(const BiphotonSpectrum& s);

/// Two-photon amplitude in retarded time, sampled on the grid conjugate to
/// the frequency grid (same point count, total span 2 pi / spacing, centered
/// on zero).
struct TimeWavepacket {
  std::vector<double> time_axis;
  double time_step = 0.0;
  ComplexMatrix values;

  /// (n * dt)^2: with this constant, sum |values|^2 dt^2 / constant equals the
  /// norm of the generating spectrum.
  double transform_constant() const;
  double parseval_norm() const;
};

/// sum_ij c_ij exp(-i omega_i t1) exp(-i omega_j t2), evaluated directly.
TimeWavepacket time_domain(const BiphotonSpectrum& s);

/// One-photon analogue of time_domain on the same conjugate time grid.
std::vector<cplx> time_domain_1d(const FrequencyGrid& grid, std::span<const cplx> amplitudes);

/// Time axis conjugate to `grid`.
std::vector<double> conjugate_time_axis(const FrequencyGrid& grid);

}  // namespace biphoton
