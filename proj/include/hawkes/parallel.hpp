#pragma once

// Deterministic parallel reductions. Work is cut into fixed-size chunks whose
// boundaries do not depend on the worker count; chunk results are merged in
// chunk order, so every reduction is bitwise independent of --threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hawkes {

/// Running count, sum and sum of squares of a scalar sample.
struct Stat {
    std::size_t n = 0;
    double sum = 0.0;
    double sumsq = 0.0;

    void add(double x) noexcept {
        ++n;
        sum += x;
        sumsq += x * x;
    }
    void merge(const Stat& o) noexcept {
        n += o.n;
        sum += o.sum;
        sumsq += o.sumsq;
    }
    [[nodiscard]] double mean() const noexcept { return n ? sum / static_cast<double>(n) : 0.0; }
    /// Unbiased sample variance (0 for n < 2).
    [[nodiscard]] double variance() const noexcept {
        if (n < 2) return 0.0;
        const double m = mean();
        const double v = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
        return v > 0.0 ? v : 0.0;
    }
    [[nodiscard]] double stderr_of_mean() const noexcept {
        return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
    }
};

namespace parallel {

/// Worker count used by all reductions: the last set_thread_count value, else
/// HAWKES_THREADS, else the hardware concurrency.
[[nodiscard]] unsigned thread_count() noexcept;
/// 0 restores the default.
void set_thread_count(unsigned n) noexcept;

inline constexpr std::size_t kDefaultChunk = 512;

/// Runs fn(begin, end) on consecutive chunks of [0, count) and returns the chunk
/// results in chunk order.
template <class R, class F>
std::vector<R> map_chunks(std::size_t count, F&& fn, std::size_t chunk = kDefaultChunk) {
    const std::size_t chunks = count == 0 ? 0 : (count + chunk - 1) / chunk;
    std::vector<R> results(chunks);
    if (chunks == 0) return results;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));
    auto run = [&](std::size_t c) {
        const std::size_t b = c * chunk;
        results[c] = fn(b, std::min(count, b + chunk));
    };
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run(c);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= chunks) return;
                try {
                    run(c);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = chunks;
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

/// Mean/variance of sample(i) over i in [0, count).
template <class F>
Stat reduce_stat(std::size_t count, F&& sample, std::size_t chunk = kDefaultChunk) {
    auto parts = map_chunks<Stat>(
        count,
        [&](std::size_t b, std::size_t e) {
            Stat s;
            for (std::size_t i = b; i < e; ++i) s.add(sample(i));
            return s;
        },
        chunk);
    Stat total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

/// k statistics at once; sample(i, out) writes k values into out.
template <class F>
std::vector<Stat> reduce_stats(std::size_t count, std::size_t k, F&& sample, std::size_t chunk = kDefaultChunk) {
    auto parts = map_chunks<std::vector<Stat>>(
        count,
        [&](std::size_t b, std::size_t e) {
            std::vector<Stat> s(k);
            std::vector<double> buf(k);
            for (std::size_t i = b; i < e; ++i) {
                std::fill(buf.begin(), buf.end(), 0.0);
                sample(i, buf.data());
                for (std::size_t j = 0; j < k; ++j) s[j].add(buf[j]);
            }
            return s;
        },
        chunk);
    std::vector<Stat> total(k);
    for (const auto& p : parts)
        for (std::size_t j = 0; j < k; ++j) total[j].merge(p[j]);
    return total;
}

}  // namespace parallel
}  // namespace hawkes
