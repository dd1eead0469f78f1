#include "metro/simd/kernels.hpp"

namespace metro::simd::detail {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void add_scalar(double c, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] += c;
}

void scale(double c, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= c;
}

void laplacian(const std::uint32_t* offsets, const std::uint32_t* targets, std::size_t rows,
               const double* x, double scale, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const std::uint32_t begin = offsets[i];
    const std::uint32_t end = offsets[i + 1];
    double nb = 0.0;
    for (std::uint32_t k = begin; k < end; ++k) nb += x[targets[k]];
    out[i] = scale * (static_cast<double>(end - begin) * x[i] - nb);
  }
}

}  // namespace

const Kernels scalar_kernels{dot, sum, axpy, xpby, add_scalar, scale, laplacian};

}  // namespace metro::simd::detail
