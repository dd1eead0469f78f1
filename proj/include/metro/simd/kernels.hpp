#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops of the Laplacian solver and flux model.
//
// Every kernel has a scalar reference implementation plus vector variants
// (AVX2+FMA on x86-64, NEON on AArch64). The variant is chosen once at
// startup from CPU features and may be overridden with METRO_GRAPH_SIMD
// (values: scalar, avx2, neon) or set_isa(). Vector variants may reorder
// floating-point reductions, so results agree with the reference to within
// rounding, not bitwise; a fixed variant is bitwise reproducible.

namespace metro::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

/// Whether this binary carries a kernel for `isa` and the CPU can run it.
bool supported(Isa isa) noexcept;

Isa active_isa() noexcept;

/// Switches the dispatch table. Returns false (and changes nothing) when
/// the ISA is not supported.
bool set_isa(Isa isa) noexcept;

/// Kernel table for one ISA. Spans passed to a kernel must have equal
/// length; the dispatching wrappers below check this.
struct Kernels {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = x + beta * y
  void (*xpby)(const double* x, double beta, double* y, std::size_t n);
  // x += c
  void (*add_scalar)(double c, double* x, std::size_t n);
  // x *= c
  void (*scale)(double c, double* x, std::size_t n);
  // out[i] = scale * (deg(i) * x[i] - sum_{j in N(i)} x[j]) over CSR rows.
  void (*laplacian)(const std::uint32_t* offsets, const std::uint32_t* targets,
                    std::size_t rows, const double* x, double scale, double* out);
};

const Kernels& kernels(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> x);
double norm2(std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
void add_scalar(double c, std::span<double> x);
void scale(double c, std::span<double> x);
void laplacian(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> targets,
               std::span<const double> x, double scale, std::span<double> out);

namespace detail {
extern const Kernels scalar_kernels;
#if defined(METRO_HAVE_AVX2)
extern const Kernels avx2_kernels;
#endif
#if defined(METRO_HAVE_NEON)
extern const Kernels neon_kernels;
#endif
}  // namespace detail

}  // namespace metro::simd
