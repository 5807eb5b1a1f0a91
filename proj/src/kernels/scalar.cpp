#include "biphoton/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace biphoton::kernels {
namespace {

double norm2(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::norm(a[k]);
  return s;
}

double diff_norm2(const cplx* a, const cplx* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::norm(a[k] - b[k]);
  return s;
}

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() - a[k].imag() * b[k].real();
  }
  return {re, im};
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
  }
  return {re, im};
}

// Written out by hand: operator* on std::complex goes through the
// Annex G NaN-recovery path, which we never need on finite data.
inline cplx mul(cplx x, cplx y) {
  return {x.real() * y.real() - x.imag() * y.imag(),
          x.real() * y.imag() + x.imag() * y.real()};
}

void axpby(cplx* out, cplx alpha, const cplx* a, cplx beta, const cplx* b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = mul(alpha, a[k]) + mul(beta, b[k]);
}

void scaled_product(cplx* out, const cplx* a, const cplx* b, cplx s, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = mul(s, mul(a[k], b[k]));
}

double max_abs_diff(const cplx* a, const cplx* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{Isa::scalar, norm2,        diff_norm2,     dot_conj,
                                 dot,         axpby,        scaled_product, max_abs_diff};
  return table;
}

}  // namespace biphoton::kernels
