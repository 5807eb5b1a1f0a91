#include "biphoton/matrix.hpp"

#include <algorithm>
#include <array>

#include "biphoton/error.hpp"
#include "biphoton/kernels.hpp"

namespace biphoton {
namespace {

constexpr std::size_t kTile = 32;

// Calls visit(i, j0, width, a_row, bt_row) for every row segment of a tile,
// where bt_row holds b(j0 + jj, i) for jj < width, i.e. the matching segment
// of b transposed.
template <typename Visit>
void for_each_transposed_tile(const ComplexMatrix& a, const ComplexMatrix& b, Visit&& visit) {
  const std::size_t n = a.size();
  std::array<cplx, kTile * kTile> scratch;
  for (std::size_t i0 = 0; i0 < n; i0 += kTile) {
    const std::size_t h = std::min(kTile, n - i0);
    for (std::size_t j0 = 0; j0 < n; j0 += kTile) {
      const std::size_t w = std::min(kTile, n - j0);
      for (std::size_t jj = 0; jj < w; ++jj) {
        const cplx* src = &b(j0 + jj, i0);
        for (std::size_t ii = 0; ii < h; ++ii) scratch[ii * kTile + jj] = src[ii];
      }
      for (std::size_t ii = 0; ii < h; ++ii) {
        visit(&a(i0 + ii, j0), &scratch[ii * kTile], w);
      }
    }
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<cplx> data)
    : n_(n), data_(std::move(data)) {
  if (data_.size() != n * n) throw InvalidArgument("matrix data does not match n*n");
}

ComplexMatrix ComplexMatrix::transposed() const {
  ComplexMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double frobenius_norm2(const ComplexMatrix& a) {
  return kernels::active().norm2(a.data().data(), a.data().size());
}

double exchange_difference_norm2(const ComplexMatrix& a) {
  const auto& k = kernels::active();
  double total = 0.0;
  for_each_transposed_tile(a, a, [&](const cplx* row, const cplx* trow, std::size_t w) {
    total += k.diff_norm2(row, trow, w);
  });
  return total;
}

double exchange_combination_norm2(const ComplexMatrix& a, cplx alpha, cplx beta) {
  const auto& k = kernels::active();
  std::array<cplx, kTile> combined;
  double total = 0.0;
  for_each_transposed_tile(a, a, [&](const cplx* row, const cplx* trow, std::size_t w) {
    k.axpby(combined.data(), alpha, row, beta, trow, w);
    total += k.norm2(combined.data(), w);
  });
  return total;
}

cplx transposed_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() != b.size()) throw InvalidArgument("matrix sizes differ");
  const auto& k = kernels::active();
  cplx total{};
  for_each_transposed_tile(a, b, [&](const cplx* row, const cplx* trow, std::size_t w) {
    total += k.dot_conj(row, trow, w);
  });
  return total;
}

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() != b.size()) throw InvalidArgument("matrix sizes differ");
  return kernels::active().max_abs_diff(a.data().data(), b.data().data(), a.data().size());
}

}  // namespace biphoton
