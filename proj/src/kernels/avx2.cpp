// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check.

#include "biphoton/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace biphoton::kernels {
namespace {

// One __m256d holds two interleaved complex numbers: [re0 im0 re1 im1].
constexpr std::size_t kLanes = 2;

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Sums of even and odd lanes: {lane0 + lane2, lane1 + lane3}.
inline void hsum_pairs(__m256d v, double& even, double& odd) {
  __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  even = _mm_cvtsd_f64(s);
  odd = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

// Complex product of two packed pairs.
inline __m256d cmul(__m256d x, __m256d y) {
  __m256d y_re = _mm256_movedup_pd(y);
  __m256d y_im = _mm256_permute_pd(y, 0xF);
  __m256d x_sw = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, y_re, _mm256_mul_pd(x_sw, y_im));
}

inline __m256d broadcast(cplx s) { return _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag()); }

double norm2(const cplx* a, std::size_t n) {
  const double* pa = as_doubles(a);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 * kLanes <= n; k += 2 * kLanes) {
    __m256d x0 = _mm256_loadu_pd(pa + 2 * k);
    __m256d x1 = _mm256_loadu_pd(pa + 2 * k + 4);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
    acc1 = _mm256_fmadd_pd(x1, x1, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += std::norm(a[k]);
  return s;
}

double diff_norm2(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = as_doubles(a);
  const double* pb = as_doubles(b);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 * kLanes <= n; k += 2 * kLanes) {
    __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * k), _mm256_loadu_pd(pb + 2 * k));
    __m256d d1 =
        _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * k + 4), _mm256_loadu_pd(pb + 2 * k + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += std::norm(a[k] - b[k]);
  return s;
}

// Accumulates the two partial products used by both complex dot products:
// same = [ar*br, ai*bi], cross = [ar*bi, ai*br].
inline void dot_partials(const cplx* a, const cplx* b, std::size_t n, std::size_t& k,
                         __m256d& same, __m256d& cross) {
  const double* pa = as_doubles(a);
  const double* pb = as_doubles(b);
  same = _mm256_setzero_pd();
  cross = _mm256_setzero_pd();
  for (k = 0; k + kLanes <= n; k += kLanes) {
    __m256d x = _mm256_loadu_pd(pa + 2 * k);
    __m256d y = _mm256_loadu_pd(pb + 2 * k);
    same = _mm256_fmadd_pd(x, y, same);
    cross = _mm256_fmadd_pd(x, _mm256_permute_pd(y, 0x5), cross);
  }
}

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
  std::size_t k = 0;
  __m256d same, cross;
  dot_partials(a, b, n, k, same, cross);
  double s_even, s_odd, c_even, c_odd;
  hsum_pairs(same, s_even, s_odd);
  hsum_pairs(cross, c_even, c_odd);
  double re = s_even + s_odd;
  double im = c_even - c_odd;
  for (; k < n; ++k) {
    re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() - a[k].imag() * b[k].real();
  }
  return {re, im};
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  std::size_t k = 0;
  __m256d same, cross;
  dot_partials(a, b, n, k, same, cross);
  double s_even, s_odd, c_even, c_odd;
  hsum_pairs(same, s_even, s_odd);
  hsum_pairs(cross, c_even, c_odd);
  double re = s_even - s_odd;
  double im = c_even + c_odd;
  for (; k < n; ++k) {
    re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
  }
  return {re, im};
}

void axpby(cplx* out, cplx alpha, const cplx* a, cplx beta, const cplx* b, std::size_t n) {
  const double* pa = as_doubles(a);
  const double* pb = as_doubles(b);
  double* po = as_doubles(out);
  const __m256d va = broadcast(alpha);
  const __m256d vb = broadcast(beta);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    __m256d r = _mm256_add_pd(cmul(va, _mm256_loadu_pd(pa + 2 * k)),
                              cmul(vb, _mm256_loadu_pd(pb + 2 * k)));
    _mm256_storeu_pd(po + 2 * k, r);
  }
  for (; k < n; ++k) {
    const cplx x = a[k], y = b[k];
    out[k] = {alpha.real() * x.real() - alpha.imag() * x.imag() + beta.real() * y.real() -
                  beta.imag() * y.imag(),
              alpha.real() * x.imag() + alpha.imag() * x.real() + beta.real() * y.imag() +
                  beta.imag() * y.real()};
  }
}

void scaled_product(cplx* out, const cplx* a, const cplx* b, cplx s, std::size_t n) {
  const double* pa = as_doubles(a);
  const double* pb = as_doubles(b);
  double* po = as_doubles(out);
  const __m256d vs = broadcast(s);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    __m256d ab = cmul(_mm256_loadu_pd(pa + 2 * k), _mm256_loadu_pd(pb + 2 * k));
    _mm256_storeu_pd(po + 2 * k, cmul(vs, ab));
  }
  for (; k < n; ++k) {
    const cplx ab{a[k].real() * b[k].real() - a[k].imag() * b[k].imag(),
                  a[k].real() * b[k].imag() + a[k].imag() * b[k].real()};
    out[k] = {s.real() * ab.real() - s.imag() * ab.imag(),
              s.real() * ab.imag() + s.imag() * ab.real()};
  }
}

double max_abs_diff(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = as_doubles(a);
  const double* pb = as_doubles(b);
  __m256d best = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * k), _mm256_loadu_pd(pb + 2 * k));
    d = _mm256_mul_pd(d, d);
    // |d|^2 lands in both lanes of each complex pair.
    d = _mm256_add_pd(d, _mm256_permute_pd(d, 0x5));
    best = _mm256_max_pd(best, d);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double m = std::sqrt(std::max({lanes[0], lanes[1], lanes[2], lanes[3]}));
  for (; k < n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

const KernelTable& avx2_kernels() noexcept {
  static const KernelTable table{Isa::avx2, norm2,        diff_norm2,     dot_conj,
                                 dot,       axpby,        scaled_product, max_abs_diff};
  return table;
}

}  // namespace biphoton::kernels
