#pragma once

#include <array>

#include "biphoton/matrix.hpp"
#include "biphoton/spectrum.hpp"

namespace biphoton {

/// Lossless beam splitter: reflectivity angle and the two phases of the
/// general 2x2 unitary. theta = pi/4 is the balanced (50/50) splitter.
struct BeamSplitterParams {
  double theta = 0.0;
  double phi_tau = 0.0;
  double phi_rho = 0.0;

  double phi() const noexcept { return phi_tau + phi_rho; }

  static BeamSplitterParams balanced() noexcept;
};

using Matrix2 = std::array<std::array<cplx, 2>, 2>;

/// [[e^{i phi_tau} cos, e^{i phi_rho} sin], [-e^{-i phi_rho} sin, e^{-i phi_tau} cos]]
Matrix2 bs_matrix(const BeamSplitterParams& p);

/// Parameters of the inverse splitter: (-theta, -phi_tau, phi_rho).
BeamSplitterParams bs_inverse(const BeamSplitterParams& p);

/// A general two-photon state over two spatial modes, stored as operator
/// coefficients: sum_ij A_kl(i, j) a_k^dag(omega_i) a_l^dag(omega_j) |0>.
/// The four blocks are kept separately; states that differ only by the
/// ordering of commuting creation operators are physically equal, which
/// `canonical()` resolves.
struct TwoPhotonState {
  ComplexMatrix a11, a12, a21, a22;

  /// The input state a_1^dag a_2^dag carrying spectrum `s`.
  static TwoPhotonState from_spectrum(const BiphotonSpectrum& s);

  /// Folds a21 into a12 (transposed) and symmetrizes a11 and a22.
  TwoPhotonState canonical() const;

  /// <psi|psi> with the bosonic two-photon kernel.
  double norm2() const;
};

/// Substitutes each input creation operator by its beam-splitter image.
TwoPhotonState apply_beamsplitter(const TwoPhotonState& in, const BeamSplitterParams& p);

/// Largest elementwise difference between the canonical forms of two states.
double max_state_difference(const TwoPhotonState& a, const TwoPhotonState& b);

/// Output of a single beam-splitter pass on a_1^dag a_2^dag input.
struct OutputDecomposition {
  ComplexMatrix amp_11;  // coefficient of a1^dag(w_i) a1^dag(w_j)
  ComplexMatrix amp_22;  // coefficient of a2^dag(w_i) a2^dag(w_j)
  ComplexMatrix amp_12;  // coefficient of a1^dag(w_i) a2^dag(w_j)
  double p_11 = 0.0;
  double p_22 = 0.0;
  double p_coinc = 0.0;
};

OutputDecomposition transform(const BiphotonSpectrum& s, const BeamSplitterParams& p);

/// Click-click probability, sum |E_ij|^2 with E = cos^2 c - sin^2 c^T.
double coincidence_probability(const BiphotonSpectrum& s, const BeamSplitterParams& p);

/// Balanced-splitter coincidence written over the full plane:
/// (1/4) sum |c_ij - c_ji|^2.
double coincidence_probability_full_plane(const BiphotonSpectrum& s);

/// |<in|out>|^2 for the balanced splitter. Only the click-click channel can
/// overlap the input.
double trapping_fidelity(const BiphotonSpectrum& s);

}  // namespace biphoton
