#include "hawkes/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hawkes::simd {

namespace {

struct Ops {
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    double (*dot_reversed)(const double*, const double*, std::size_t) noexcept;
    double (*sum)(const double*, std::size_t) noexcept;
    void (*scale)(double*, std::size_t, double) noexcept;
};

constexpr Ops kScalar{scalar::dot, scalar::dot_reversed, scalar::sum, scalar::scale};
#if HAWKES_SIMD_X86
constexpr Ops kAvx2{avx2::dot, avx2::dot_reversed, avx2::sum, avx2::scale};
#endif

const Ops& ops_for(Backend b) noexcept {
#if HAWKES_SIMD_X86
    if (b == Backend::avx2) return kAvx2;
#endif
    return kScalar;
}

Backend detect() noexcept {
    if (const char* env = std::getenv("HAWKES_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
    }
    return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> b{detect()};
    return b;
}

const Ops& active() noexcept { return ops_for(current().load(std::memory_order_relaxed)); }

}  // namespace

bool backend_supported(Backend b) noexcept {
    if (b == Backend::scalar) return true;
#if HAWKES_SIMD_X86 && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!backend_supported(b)) throw std::invalid_argument("SIMD backend not supported on this CPU");
    current().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept { return b == Backend::avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size());
}
double dot_reversed(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot_reversed(a.data(), b.data(), a.size());
}
double sum(std::span<const double> a) noexcept { return active().sum(a.data(), a.size()); }
void scale(std::span<double> out, double s) noexcept { active().scale(out.data(), out.size(), s); }

}  // namespace hawkes::simd
