#pragma once

// Reductions used by the quadrature and Volterra inner loops. Each operation has
// a scalar reference implementation and, on x86-64, an AVX2/FMA variant chosen at
// runtime from CPU capabilities. The HAWKES_SIMD environment variable
// ("scalar" or "avx2") overrides the choice.

#include <span>
#include <string_view>

namespace hawkes::simd {

enum class Backend { scalar, avx2 };

/// sum_i a[i] * b[i]; the spans must have equal length.
double dot(std::span<const double> a, std::span<const double> b) noexcept;
/// sum_i a[i] * b[n-1-i] (discrete convolution at one output point).
double dot_reversed(std::span<const double> a, std::span<const double> b) noexcept;
double sum(std::span<const double> a) noexcept;
/// out[i] *= s
void scale(std::span<double> out, double s) noexcept;

[[nodiscard]] Backend active_backend() noexcept;
[[nodiscard]] bool backend_supported(Backend b) noexcept;
/// Throws std::invalid_argument if the backend is not available on this CPU.
void set_backend(Backend b);
[[nodiscard]] std::string_view backend_name(Backend b) noexcept;

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double dot_reversed(const double* a, const double* b, std::size_t n) noexcept;
double sum(const double* a, std::size_t n) noexcept;
void scale(double* out, std::size_t n, double s) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define HAWKES_SIMD_X86 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double dot_reversed(const double* a, const double* b, std::size_t n) noexcept;
double sum(const double* a, std::size_t n) noexcept;
void scale(double* out, std::size_t n, double s) noexcept;
}  // namespace avx2
#else
#define HAWKES_SIMD_X86 0
#endif

}  // namespace hawkes::simd
