// Compiled with -mavx2 -mfma; only called after a runtime CPU check.
#include "hawkes/simd.hpp"

#include <immintrin.h>

namespace hawkes::simd::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double dot_reversed(const double* a, const double* b, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    // b[n-1-i .. n-4-i] loaded as one vector and lane-reversed
    for (; i + 8 <= n; i += 8) {
        const __m256d b0 = _mm256_permute4x64_pd(_mm256_loadu_pd(b + n - 4 - i), 0x1B);
        const __m256d b1 = _mm256_permute4x64_pd(_mm256_loadu_pd(b + n - 8 - i), 0x1B);
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), b0, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), b1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d b0 = _mm256_permute4x64_pd(_mm256_loadu_pd(b + n - 4 - i), 0x1B);
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), b0, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[n - 1 - i];
    return acc;
}

double sum(const double* a, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(a + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(a + i));
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i];
    return acc;
}

void scale(double* out, std::size_t n, double s) noexcept {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(out + i), vs));
    for (; i < n; ++i) out[i] *= s;
}

}  // namespace hawkes::simd::avx2
