#include <cstdlib>
#include <string>

#include "dgn/error.hpp"
#include "dgn/simd/kernels.hpp"

namespace dgn::simd {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::dot, &scalar::axpy, &scalar::matvec};
#if defined(DGN_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::dot, &avx2::axpy, &avx2::matvec};
#endif

const KernelTable* select_default() {
  if (const char* env = std::getenv("DGN_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &kScalar;
    if (want == "avx2" && supported(Isa::Avx2)) return &table(Isa::Avx2);
  }
  if (supported(Isa::Avx2)) return &table(Isa::Avx2);
  return &kScalar;
}

const KernelTable*& current() {
  static const KernelTable* ptr = select_default();
  return ptr;
}

}  // namespace

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(DGN_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    throw Error(ErrorCode::InvalidArgument, std::string("ISA not available: ") + std::string(name(isa)));
  }
#if defined(DGN_HAVE_AVX2)
  if (isa == Isa::Avx2) return kAvx2;
#endif
  return kScalar;
}

const KernelTable& active() noexcept { return *current(); }

void force(Isa isa) { current() = &table(isa); }

std::string_view name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

void combine_rows(std::span<const double> weights, std::span<const double> in, std::span<double> out,
                  std::size_t rows, std::size_t width) {
  const KernelTable& k = active();
  for (std::size_t r = 0; r < rows; ++r) {
    double* dst = out.data() + r * width;
    for (std::size_t j = 0; j < width; ++j) dst[j] = 0.0;
    for (std::size_t l = 0; l < rows; ++l) {
      const double w = weights[r * rows + l];
      if (w == 0.0) continue;
      k.axpy(w, in.data() + l * width, dst, width);
    }
  }
}

}  // namespace dgn::simd
