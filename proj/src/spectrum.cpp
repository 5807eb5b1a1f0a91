#include "biphoton/spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "biphoton/error.hpp"
#include "biphoton/kernels.hpp"

namespace biphoton {
namespace {

constexpr double kEmptyWeight = 1e-24;

void require_finite(const ComplexMatrix& m) {
  for (const cplx& v : m.data()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DegenerateSpectrum("spectrum contains non-finite amplitudes");
    }
  }
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return out;
}

// F(k, i) = exp(-i omega_i t_k).
ComplexMatrix fourier_kernel(const FrequencyGrid& grid, const std::vector<double>& times) {
  const std::size_t n = grid.size();
  ComplexMatrix f(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) f(k, i) = std::polar(1.0, -grid.frequency(i) * times[k]);
  return f;
}

}  // namespace

BiphotonSpectrum BiphotonSpectrum::from_function(const FrequencyGrid& grid,
                                                 const std::function<cplx(double, double)>& f) {
  const std::size_t n = grid.size();
  const std::vector<double> w = grid.frequencies();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = f(w[i], w[j]);
  return from_amplitudes(grid, std::move(m));
}

BiphotonSpectrum BiphotonSpectrum::from_amplitudes(const FrequencyGrid& grid,
                                                   ComplexMatrix amplitudes) {
  if (amplitudes.size() != grid.size()) {
    throw InvalidArgument("amplitude matrix does not match the grid size");
  }
  require_finite(amplitudes);
  const double norm2 = frobenius_norm2(amplitudes);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw DegenerateSpectrum("degenerate spectrum: all samples are zero");
  }
  const cplx scale{1.0 / std::sqrt(norm2), 0.0};
  auto data = amplitudes.data();
  kernels::active().axpby(data.data(), scale, data.data(), cplx{}, data.data(), data.size());
  return BiphotonSpectrum(grid, std::move(amplitudes));
}

BiphotonSpectrum BiphotonSpectrum::from_unit_amplitudes(const FrequencyGrid& grid,
                                                        ComplexMatrix amplitudes) {
  if (amplitudes.size() != grid.size()) {
    throw InvalidArgument("amplitude matrix does not match the grid size");
  }
  require_finite(amplitudes);
  const double norm2 = frobenius_norm2(amplitudes);
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw NumericError("amplitudes are not unit norm (sum |c|^2 = " + std::to_string(norm2) + ")");
  }
  return BiphotonSpectrum(grid, std::move(amplitudes));
}

BiphotonSpectrum swap_photons(const BiphotonSpectrum& s) {
  return BiphotonSpectrum::from_unit_amplitudes(s.grid(), s.amplitudes().transposed());
}

SymmetryParts symmetry_decompose(const BiphotonSpectrum& s) {
  const auto& k = kernels::active();
  const ComplexMatrix& c = s.amplitudes();
  const ComplexMatrix ct = c.transposed();
  const std::size_t total = c.data().size();

  ComplexMatrix sym(c.size()), anti(c.size());
  k.axpby(sym.data().data(), 0.5, c.data().data(), 0.5, ct.data().data(), total);
  k.axpby(anti.data().data(), 0.5, c.data().data(), -0.5, ct.data().data(), total);

  SymmetryParts parts;
  parts.w_sym = frobenius_norm2(sym);
  parts.w_antisym = frobenius_norm2(anti);
  if (parts.w_sym > kEmptyWeight) {
    parts.symmetric = BiphotonSpectrum::from_amplitudes(s.grid(), std::move(sym));
  }
  if (parts.w_antisym > kEmptyWeight) {
    parts.antisymmetric = BiphotonSpectrum::from_amplitudes(s.grid(), std::move(anti));
  }
  return parts;
}

double antisymmetric_weight(const BiphotonSpectrum& s) {
  return 0.25 * exchange_difference_norm2(s.amplitudes());
}

BiphotonSpectrum apply_path_delays(const BiphotonSpectrum& s, double z1, double z2,
                                   double c_light) {
  if (!(c_light > 0.0)) throw InvalidArgument("speed of light must be positive");
  const FrequencyGrid& grid = s.grid();
  const std::size_t n = grid.size();
  std::vector<cplx> photon2_phase(n);
  for (std::size_t j = 0; j < n; ++j) photon2_phase[j] = std::polar(1.0, grid.frequency(j) * z2 / c_light);

  const auto& k = kernels::active();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx photon1_phase = std::polar(1.0, grid.frequency(i) * z1 / c_light);
    k.scaled_product(out.row(i).data(), s.amplitudes().row(i).data(), photon2_phase.data(),
                     photon1_phase, n);
  }
  return BiphotonSpectrum::from_unit_amplitudes(grid, std::move(out));
}

double exchange_overlap(const BiphotonSpectrum& s) {
  return transposed_inner(s.amplitudes(), s.amplitudes()).real();
}

namespace {

struct Svd {
  Eigen::VectorXd singular_values;
  Eigen::MatrixXcd u;
  Eigen::MatrixXcd v;
};

// BDCSVD can return NaN on some exactly low-rank inputs; JacobiSVD does not.
Svd decompose(const Eigen::MatrixXcd& m, unsigned options) {
  const Eigen::BDCSVD<Eigen::MatrixXcd> fast(m, options);
  if (fast.info() == Eigen::Success && fast.singularValues().allFinite() &&
      (options == 0 || (fast.matrixU().allFinite() && fast.matrixV().allFinite()))) {
    return {fast.singularValues(), options ? fast.matrixU() : Eigen::MatrixXcd{},
            options ? fast.matrixV() : Eigen::MatrixXcd{}};
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> slow(m, options);
  return {slow.singularValues(), options ? slow.matrixU() : Eigen::MatrixXcd{},
          options ? slow.matrixV() : Eigen::MatrixXcd{}};
}

}  // namespace

double separability_rank1_fraction(const BiphotonSpectrum& s) {
  const Eigen::MatrixXcd m = to_eigen(s.amplitudes());
  const Svd svd = decompose(m, 0);
  const double top = svd.singular_values(0);
  return std::min(1.0, top * top / m.squaredNorm());
}

SchmidtPair leading_schmidt_pair(const BiphotonSpectrum& s) {
  const Eigen::MatrixXcd m = to_eigen(s.amplitudes());
  const Svd svd = decompose(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double top = svd.singular_values(0);
  SchmidtPair pair{top * top, std::vector<cplx>(s.size()), std::vector<cplx>(s.size())};
  // m = U S V^H, so photon 2 carries conj(V).
  for (std::size_t i = 0; i < s.size(); ++i) {
    pair.photon1[i] = svd.u(static_cast<Eigen::Index>(i), 0);
    pair.photon2[i] = std::conj(svd.v(static_cast<Eigen::Index>(i), 0));
  }
  return pair;
}

std::vector<double> conjugate_time_axis(const FrequencyGrid& grid) {
  const std::size_t n = grid.size();
  const double dt = 2.0 * std::numbers::pi / (static_cast<double>(n) * grid.spacing());
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = (static_cast<double>(k) - static_cast<double>(grid.center_index())) * dt;
  }
  return t;
}

double TimeWavepacket::transform_constant() const {
  const double span = static_cast<double>(values.size()) * time_step;
  return span * span;
}

double TimeWavepacket::parseval_norm() const {
  return frobenius_norm2(values) * time_step * time_step / transform_constant();
}

TimeWavepacket time_domain(const BiphotonSpectrum& s) {
  const FrequencyGrid& grid = s.grid();
  const std::size_t n = grid.size();
  TimeWavepacket out;
  out.time_axis = conjugate_time_axis(grid);
  out.time_step = 2.0 * std::numbers::pi / (static_cast<double>(n) * grid.spacing());
  const ComplexMatrix f = fourier_kernel(grid, out.time_axis);
  const auto& k = kernels::active();

  // half(l, i) = sum_j c(i, j) F(l, j): photon 2 transformed, stored transposed.
  ComplexMatrix half(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      half(l, i) = k.dot(s.amplitudes().row(i).data(), f.row(l).data(), n);

  out.values = ComplexMatrix(n);
  for (std::size_t t1 = 0; t1 < n; ++t1)
    for (std::size_t t2 = 0; t2 < n; ++t2)
      out.values(t1, t2) = k.dot(f.row(t1).data(), half.row(t2).data(), n);
  return out;
}

std::vector<cplx> time_domain_1d(const FrequencyGrid& grid, std::span<const cplx> amplitudes) {
  if (amplitudes.size() != grid.size()) throw InvalidArgument("amplitude length does not match grid");
  const std::vector<double> t = conjugate_time_axis(grid);
  std::vector<cplx> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    cplx acc{};
    for (std::size_t i = 0; i < grid.size(); ++i)
      acc += amplitudes[i] * std::polar(1.0, -grid.frequency(i) * t[k]);
    out[k] = acc;
  }
  return out;
}

}  // namespace biphoton
