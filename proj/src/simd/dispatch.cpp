#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "metro/error.hpp"
#include "metro/simd/kernels.hpp"

namespace metro::simd {

namespace {

bool cpu_has(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(METRO_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(METRO_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() noexcept {
  if (const char* env = std::getenv("METRO_GRAPH_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && cpu_has(Isa::Avx2)) return Isa::Avx2;
    if (want == "neon" && cpu_has(Isa::Neon)) return Isa::Neon;
  }
  if (cpu_has(Isa::Avx2)) return Isa::Avx2;
  if (cpu_has(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

struct State {
  std::atomic<Isa> isa{best_isa()};
  std::atomic<const Kernels*> table{&kernels(isa.load())};
};

State& state() {
  static State s;
  return s;
}

const Kernels& active() { return *state().table.load(std::memory_order_acquire); }

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": lengths " + std::to_string(a) + " and " + std::to_string(b));
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "?";
}

bool supported(Isa isa) noexcept { return cpu_has(isa); }

Isa active_isa() noexcept { return state().isa.load(); }

bool set_isa(Isa isa) noexcept {
  if (!cpu_has(isa)) return false;
  state().isa.store(isa);
  state().table.store(&kernels(isa), std::memory_order_release);
  return true;
}

const Kernels& kernels(Isa isa) {
  switch (isa) {
#if defined(METRO_HAVE_AVX2)
    case Isa::Avx2: return detail::avx2_kernels;
#endif
#if defined(METRO_HAVE_NEON)
    case Isa::Neon: return detail::neon_kernels;
#endif
    default: return detail::scalar_kernels;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same(a.size(), b.size(), "dot");
  return active().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size(), "axpy");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  check_same(x.size(), y.size(), "xpby");
  active().xpby(x.data(), beta, y.data(), x.size());
}

void add_scalar(double c, std::span<double> x) { active().add_scalar(c, x.data(), x.size()); }

void scale(double c, std::span<double> x) { active().scale(c, x.data(), x.size()); }

void laplacian(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> targets,
               std::span<const double> x, double scale, std::span<double> out) {
  const std::size_t rows = offsets.empty() ? 0 : offsets.size() - 1;
  check_same(x.size(), rows, "laplacian");
  check_same(out.size(), rows, "laplacian");
  active().laplacian(offsets.data(), targets.data(), rows, x.data(), scale, out.data());
}

}  // namespace metro::simd
