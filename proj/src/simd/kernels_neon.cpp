#include <arm_neon.h>

#include "metro/simd/kernels.hpp"

namespace metro::simd::detail {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  const float64x2_t b = vdupq_n_f64(beta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(x + i), b, vld1q_f64(y + i)));
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void add_scalar(double c, double* x, std::size_t n) {
  const float64x2_t v = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vaddq_f64(vld1q_f64(x + i), v));
  for (; i < n; ++i) x[i] += c;
}

void scale(double c, double* x, std::size_t n) {
  const float64x2_t v = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), v));
  for (; i < n; ++i) x[i] *= c;
}

// No gather on NEON: pairs of neighbours are loaded lane by lane.
void laplacian(const std::uint32_t* offsets, const std::uint32_t* targets, std::size_t rows,
               const double* x, double scale, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const std::uint32_t begin = offsets[i];
    const std::uint32_t end = offsets[i + 1];
    std::uint32_t k = begin;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; k + 2 <= end; k += 2) {
      float64x2_t v = vdupq_n_f64(x[targets[k]]);
      v = vsetq_lane_f64(x[targets[k + 1]], v, 1);
      acc = vaddq_f64(acc, v);
    }
    double nb = vaddvq_f64(acc);
    for (; k < end; ++k) nb += x[targets[k]];
    out[i] = scale * (static_cast<double>(end - begin) * x[i] - nb);
  }
}

}  // namespace

const Kernels neon_kernels{dot, sum, axpy, xpby, add_scalar, scale, laplacian};

}  // namespace metro::simd::detail
