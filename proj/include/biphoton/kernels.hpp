#pragma once

// Data-parallel inner loops over contiguous complex arrays.
//
// Every kernel exists as a portable scalar reference and, where the build
// and the host CPU allow it, an AVX2+FMA variant. The variant is chosen once
// at startup; BIPHOTON_ISA=scalar in the environment forces the reference
// path. Vector variants reorder floating-point reductions, so results agree
// with the reference to rounding, not bit for bit.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace biphoton::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  // sum |a_k|^2
  double (*norm2)(const cplx* a, std::size_t n);
  // sum |a_k - b_k|^2
  double (*diff_norm2)(const cplx* a, const cplx* b, std::size_t n);
  // sum conj(a_k) * b_k
  cplx (*dot_conj)(const cplx* a, const cplx* b, std::size_t n);
  // sum a_k * b_k
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
  // out_k = alpha * a_k + beta * b_k   (out may alias a or b)
  void (*axpby)(cplx* out, cplx alpha, const cplx* a, cplx beta, const cplx* b,
                std::size_t n);
  // out_k = s * a_k * b_k   (out may alias a)
  void (*scaled_product)(cplx* out, const cplx* a, const cplx* b, cplx s, std::size_t n);
  // max_k |a_k - b_k|
  double (*max_abs_diff)(const cplx* a, const cplx* b, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// The AVX2 table, or nullptr when it was not compiled in or the CPU lacks
/// AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// Every table usable on this machine, reference first.
std::vector<const KernelTable*> available_tables();

/// The table selected for this process.
const KernelTable& active() noexcept;

}  // namespace biphoton::kernels
