#pragma once

// Hawkes simulation by thinning on an explicit Poisson embedding. Every process
// drawn from the same RngStream reads the same realization of the planar Poisson
// measure N on (0, T] x R+, so pathwise comparisons between processes with
// different intensities are exact.

#include <cstddef>
#include <functional>
#include <vector>

#include "hawkes/event_path.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

/// Unit-rate Poisson measure on (0, T] x R+, generated lazily in horizontal
/// bands [k h, (k+1) h). Band k is a pure function of (stream, k).
class PoissonEmbedding {
public:
    struct Point {
        double time;
        double mark;
    };

    PoissonEmbedding(RngStream stream, double horizon, double band_height = 1.0);

    /// Points of band k in increasing time order.
    const std::vector<Point>& band(std::size_t k);
    [[nodiscard]] double band_height() const noexcept { return band_height_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] const RngStream& stream() const noexcept { return stream_; }
    /// All points with mark <= level, in time order.
    std::vector<Point> points_below(double level);

private:
    RngStream stream_;
    double horizon_;
    double band_height_;
    std::vector<std::vector<Point>> bands_;
    std::vector<bool> generated_;
};

/// Time-indexed baseline mu^v(t) of a generalized Hawkes process.
class Baseline {
public:
    static Baseline constant(double mu);
    /// mu + sum over `sources` of Phi(t - s); sources are past jump times (history
    /// and enforced jumps) in chronological order.
    static Baseline excited(double mu, std::vector<double> sources);
    /// Arbitrary non-negative rate with a caller-provided bound
    /// sup_after(t) >= sup_{s > t} rate(s).
    static Baseline custom(std::function<double(double)> rate, std::function<double(double)> sup_after);

    [[nodiscard]] double rate(const Kernel& kernel, double t) const;
    [[nodiscard]] double bound_after(const Kernel& kernel, double t) const;
    /// Marks at or below this level are tagged spontaneous.
    [[nodiscard]] double spontaneous_level(const Kernel& kernel, double t) const;

private:
    enum class Kind { constant, excited, custom };
    Kind kind_ = Kind::constant;
    double mu_ = 0.0;
    std::vector<double> sources_;
    std::function<double(double)> rate_;
    std::function<double(double)> sup_after_;
};

/// Thinning on `embedding` over (start, stop), or (start, stop] when include_stop.
/// Intensity at a candidate time t is baseline(t) + sum_{start < tau < t} Phi(t - tau).
EventPath thin(PoissonEmbedding& embedding, const Kernel& kernel, const Baseline& baseline, double start,
               double stop, bool include_stop);

/// Lambda_t = mu + sum_{tau_i < t} Phi(t - tau_i); t in (0, T].
[[nodiscard]] double intensity_at(const HawkesParams& params, const EventPath& path, double t);

EventPath simulate_standard(const HawkesParams& params, const RngStream& rng);
EventPath simulate_standard(const HawkesParams& params, PoissonEmbedding& embedding);

/// Generalized Hawkes process on (v, T]; the history influences the path only
/// through `baseline`.
struct GeneralizedPath {
    std::size_t initial_count = 0;
    EventPath path;
    /// H_t = initial_count + jumps in (v, t].
    [[nodiscard]] std::size_t count_at(double t) const noexcept { return initial_count + path.count_until(t); }
};

GeneralizedPath simulate_generalized(double start, const Baseline& baseline, const EventPath& history,
                                     std::size_t initial_count, const HawkesParams& params, const RngStream& rng);
GeneralizedPath simulate_generalized(double start, const Baseline& baseline, const EventPath& history,
                                     std::size_t initial_count, const HawkesParams& params,
                                     PoissonEmbedding& embedding);

/// Homogeneous Poisson(mu) path made of the embedding points with mark <= mu.
EventPath simulate_poisson_base(double mu, double horizon, const RngStream& rng);
EventPath simulate_poisson_base(double mu, PoissonEmbedding& embedding);

}  // namespace hawkes
