#pragma once

#include <cstddef>
#include <span>

// Dense row kernels used by the simplex tableau. Each operation has a scalar
// reference and vector variants; the variant is picked once at startup from
// the running CPU (ATR_SIMD=scalar|avx2|neon forces one when available).
//
// Vector variants use separate multiply and add (no fused multiply-add), and
// the build disables floating-point contraction, so every variant produces
// bit-identical results to the scalar reference.

namespace atr::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);

Isa active_isa();
/// Switches the dispatch target (tests, benchmarks). Returns false if unsupported.
bool set_isa(Isa isa);

/// y += a * x
void axpy(std::span<double> y, double a, std::span<const double> x);
/// y *= a
void scale(std::span<double> y, double a);
/// max |x_i| (0 for empty input)
double max_abs(std::span<const double> x);

namespace scalar {
void axpy(double* y, double a, const double* x, std::size_t n);
void scale(double* y, double a, std::size_t n);
double max_abs(const double* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpy(double* y, double a, const double* x, std::size_t n);
void scale(double* y, double a, std::size_t n);
double max_abs(const double* x, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void axpy(double* y, double a, const double* x, std::size_t n);
void scale(double* y, double a, std::size_t n);
double max_abs(const double* x, std::size_t n);
}  // namespace neon
#endif

}  // namespace atr::kernels
