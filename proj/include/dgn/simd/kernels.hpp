#pragma once
// Dense double-precision kernels used by the solvers and spectral routines.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2 variant. The variant is picked once at startup from CPUID; the
// DGN_SIMD environment variable ("scalar" or "avx2") overrides the choice.
//
// Lane-wise kernels (axpy, combine_rows) are bit-identical across variants
// because each output element sees the same operation sequence. Reductions
// (dot, matvec) differ only in summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace dgn::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*matvec)(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);
}  // namespace scalar

#if defined(DGN_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);
}  // namespace avx2
#endif

bool supported(Isa isa) noexcept;
const KernelTable& table(Isa isa);
const KernelTable& active() noexcept;
// Pins the active table (tests use this to compare variants). Throws
// InvalidArgument when the ISA is not available on this host.
void force(Isa isa);
std::string_view name(Isa isa) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double squared_norm(std::span<const double> a) { return dot(a, a); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  active().matvec(a.data(), x.data(), y.data(), y.size(), x.size());
}

// out[k] = sum_l weights[k][l] * in[l] over rows of width `width`, visiting
// l in ascending order and skipping exact-zero weights.
void combine_rows(std::span<const double> weights, std::span<const double> in, std::span<double> out,
                  std::size_t rows, std::size_t width);

}  // namespace dgn::simd
