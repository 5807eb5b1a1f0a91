#include "biphoton/beamsplitter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "biphoton/error.hpp"
#include "biphoton/kernels.hpp"

namespace biphoton {
namespace {

// Bosonic norm of sum_ij d_ij a^dag(w_i) a^dag(w_j) |0> for one mode:
// sum conj(d_ij) (d_ij + d_ji).
double same_mode_norm2(const ComplexMatrix& d) {
  return frobenius_norm2(d) + transposed_inner(d, d).real();
}

ComplexMatrix scaled(const ComplexMatrix& m, cplx s) {
  ComplexMatrix out(m.size());
  const auto src = m.data();
  kernels::active().axpby(out.data().data(), s, src.data(), cplx{}, src.data(), src.size());
  return out;
}

// out += s * m
void accumulate(ComplexMatrix& out, cplx s, const ComplexMatrix& m) {
  auto dst = out.data();
  kernels::active().axpby(dst.data(), 1.0, dst.data(), s, m.data().data(), dst.size());
}

}  // namespace

BeamSplitterParams BeamSplitterParams::balanced() noexcept {
  return {std::numbers::pi / 4.0, 0.0, 0.0};
}

Matrix2 bs_matrix(const BeamSplitterParams& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {{{std::polar(c, p.phi_tau), std::polar(s, p.phi_rho)},
           {-std::polar(s, -p.phi_rho), std::polar(c, -p.phi_tau)}}};
}

BeamSplitterParams bs_inverse(const BeamSplitterParams& p) {
  return {-p.theta, -p.phi_tau, p.phi_rho};
}

TwoPhotonState TwoPhotonState::from_spectrum(const BiphotonSpectrum& s) {
  const std::size_t n = s.size();
  return {ComplexMatrix(n), s.amplitudes(), ComplexMatrix(n), ComplexMatrix(n)};
}

TwoPhotonState TwoPhotonState::canonical() const {
  const std::size_t n = a12.size();
  TwoPhotonState out{ComplexMatrix(n), a12, ComplexMatrix(n), ComplexMatrix(n)};
  accumulate(out.a12, 1.0, a21.transposed());
  out.a11 = scaled(a11, 0.5);
  accumulate(out.a11, 0.5, a11.transposed());
  out.a22 = scaled(a22, 0.5);
  accumulate(out.a22, 0.5, a22.transposed());
  return out;
}

double TwoPhotonState::norm2() const {
  const TwoPhotonState c = canonical();
  return same_mode_norm2(c.a11) + same_mode_norm2(c.a22) + frobenius_norm2(c.a12);
}

TwoPhotonState apply_beamsplitter(const TwoPhotonState& in, const BeamSplitterParams& p) {
  // Each input operator a_k^dag maps to sum_m T(k, m) a_m^dag with T = M^T.
  const Matrix2 m = bs_matrix(p);
  const auto t = [&](int k, int l) { return m[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)]; };

  const std::size_t n = in.a12.size();
  TwoPhotonState out{ComplexMatrix(n), ComplexMatrix(n), ComplexMatrix(n), ComplexMatrix(n)};
  const ComplexMatrix* blocks[2][2] = {{&in.a11, &in.a12}, {&in.a21, &in.a22}};
  ComplexMatrix* targets[2][2] = {{&out.a11, &out.a12}, {&out.a21, &out.a22}};
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const cplx w = t(k, a) * t(l, b);
          if (w != cplx{}) accumulate(*targets[a][b], w, *blocks[k][l]);
        }
  return out;
}

double max_state_difference(const TwoPhotonState& a, const TwoPhotonState& b) {
  const TwoPhotonState ca = a.canonical();
  const TwoPhotonState cb = b.canonical();
  return std::max({max_abs_difference(ca.a11, cb.a11), max_abs_difference(ca.a12, cb.a12),
                   max_abs_difference(ca.a22, cb.a22)});
}

OutputDecomposition transform(const BiphotonSpectrum& s, const BeamSplitterParams& p) {
  const double c = std::cos(p.theta);
  const double sn = std::sin(p.theta);
  const ComplexMatrix& amp = s.amplitudes();
  const ComplexMatrix ampt = amp.transposed();
  const auto& k = kernels::active();

  OutputDecomposition out;
  out.amp_11 = scaled(amp, std::polar(c * sn, p.phi()));
  out.amp_22 = scaled(amp, -std::polar(c * sn, -p.phi()));
  out.amp_12 = ComplexMatrix(amp.size());
  k.axpby(out.amp_12.data().data(), c * c, amp.data().data(), -sn * sn, ampt.data().data(),
          amp.data().size());

  out.p_11 = same_mode_norm2(out.amp_11);
  out.p_22 = same_mode_norm2(out.amp_22);
  out.p_coinc = frobenius_norm2(out.amp_12);
  return out;
}

double coincidence_probability(const BiphotonSpectrum& s, const BeamSplitterParams& p) {
  const double c2 = std::cos(p.theta) * std::cos(p.theta);
  const double s2 = std::sin(p.theta) * std::sin(p.theta);
  return exchange_combination_norm2(s.amplitudes(), c2, -s2);
}

double coincidence_probability_full_plane(const BiphotonSpectrum& s) {
  return 0.25 * exchange_difference_norm2(s.amplitudes());
}

double trapping_fidelity(const BiphotonSpectrum& s) {
  const OutputDecomposition out = transform(s, BeamSplitterParams::balanced());
  const ComplexMatrix& c = s.amplitudes();
  const cplx overlap = kernels::active().dot_conj(c.data().data(), out.amp_12.data().data(),
                                                  c.data().size());
  return std::norm(overlap);
}

}  // namespace biphoton
