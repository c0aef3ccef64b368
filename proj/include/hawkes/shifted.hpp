#pragma once

// Multi-shifted Hawkes paths: deterministic jumps enforced at v_n < ... < v_1,
// each feeding the excitation kernel, with the remaining jumps thinned from the
// same Poisson embedding as the unshifted process.

#include <cstddef>
#include <vector>

#include "hawkes/event_path.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

/// Shift times stored ascending: times.front() = v_n, times.back() = v_1.
struct ShiftSpec {
    std::vector<double> times;

    ShiftSpec() = default;
    explicit ShiftSpec(std::vector<double> ascending) : times(std::move(ascending)) {}
    /// From a descending tuple u_1 > ... > u_n (simplex order).
    static ShiftSpec from_descending(const std::vector<double>& desc);

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    /// Throws std::domain_error unless 0 < v_n < ... < v_1 < horizon.
    void validate(double horizon) const;
};

EventPath simulate_shifted(const HawkesParams& params, const ShiftSpec& shifts, const RngStream& rng);
EventPath simulate_shifted(const HawkesParams& params, const ShiftSpec& shifts, PoissonEmbedding& embedding);

/// Keeps `path` on [0, v), enforces a jump at v and re-simulates (v, T] as a
/// generalized Hawkes process whose baseline carries every jump up to v.
EventPath reshift(const HawkesParams& params, const EventPath& path, double v, PoissonEmbedding& embedding);

/// Same kernel and horizon; baseline mu + n Phi(0) for non-increasing kernels,
/// mu + n Phi* otherwise.
[[nodiscard]] HawkesParams dominating_params(const HawkesParams& params, std::size_t n);

}  // namespace hawkes
