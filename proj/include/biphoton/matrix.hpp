#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace biphoton {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}
  ComplexMatrix(std::size_t n, std::vector<cplx> data);

  std::size_t size() const noexcept { return n_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * n_ + j];
  }

  std::span<cplx> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const cplx> row(std::size_t i) const noexcept {
    return {data_.data() + i * n_, n_};
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix transposed() const;

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> data_;
};

// Matrix-level reductions built on the active kernel table. The transposed
// operand is visited tile by tile so no full transpose is materialized.

/// Sum of |a_ij|^2.
double frobenius_norm2(const ComplexMatrix& a);

/// Sum over i,j of |a_ij - a_ji|^2.
double exchange_difference_norm2(const ComplexMatrix& a);

/// Sum over i,j of |alpha a_ij + beta a_ji|^2.
double exchange_combination_norm2(const ComplexMatrix& a, cplx alpha, cplx beta);

/// Sum over i,j of conj(a_ij) * b_ji.
cplx transposed_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |a_ij - b_ij|. Sizes must agree.
double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace biphoton
