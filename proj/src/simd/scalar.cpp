#include "hawkes/simd.hpp"

namespace hawkes::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double dot_reversed(const double* a, const double* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[n - 1 - i];
    return acc;
}

double sum(const double* a, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

void scale(double* out, std::size_t n, double s) noexcept {
    for (std::size_t i = 0; i < n; ++i) out[i] *= s;
}

}  // namespace hawkes::simd::scalar
