#include "hawkes/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hawkes::parallel {

namespace {
std::atomic<unsigned> g_threads{0};

unsigned default_threads() noexcept {
    if (const char* env = std::getenv("HAWKES_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}
}  // namespace

unsigned thread_count() noexcept {
    const unsigned t = g_threads.load();
    return t ? t : default_threads();
}

void set_thread_count(unsigned n) noexcept { g_threads.store(n); }

}  // namespace hawkes::parallel
