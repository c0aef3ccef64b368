#include "hawkes/shifted.hpp"

#include <stdexcept>

namespace hawkes {

namespace {

// Left limit of the intensity at t given all jumps before t, summed chronologically.
double left_limit(const HawkesParams& params, const EventPath& path, double t) {
    double acc = params.mu;
    for (const auto& e : path.events) acc += params.kernel.eval_unchecked(t - e.time);
    return acc;
}

void append(EventPath& dst, const EventPath& src) {
    dst.events.insert(dst.events.end(), src.events.begin(), src.events.end());
}

}  // namespace

ShiftSpec ShiftSpec::from_descending(const std::vector<double>& desc) {
    return ShiftSpec(std::vector<double>(desc.rbegin(), desc.rend()));
}

void ShiftSpec::validate(double horizon) const {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0 && times[i] < horizon)) throw std::domain_error("shift time outside (0, T)");
        if (i > 0 && !(times[i] > times[i - 1])) throw std::domain_error("shift times must be strictly increasing");
    }
}

EventPath simulate_shifted(const HawkesParams& params, const ShiftSpec& shifts, PoissonEmbedding& embedding) {
    shifts.validate(params.horizon);
    if (shifts.times.empty()) return simulate_standard(params, embedding);

    EventPath out = thin(embedding, params.kernel, Baseline::constant(params.mu), 0.0, shifts.times.front(), false);
    for (std::size_t j = 0; j < shifts.size(); ++j) {
        const double v = shifts.times[j];
        out.events.push_back({v, EventTag::enforced, left_limit(params, out, v)});
        const bool last = j + 1 == shifts.size();
        const double stop = last ? params.horizon : shifts.times[j + 1];
        append(out, thin(embedding, params.kernel, Baseline::excited(params.mu, out.times()), v, stop, last));
    }
    return out;
}

EventPath simulate_shifted(const HawkesParams& params, const ShiftSpec& shifts, const RngStream& rng) {
    PoissonEmbedding embedding(rng, params.horizon);
    return simulate_shifted(params, shifts, embedding);
}

EventPath reshift(const HawkesParams& params, const EventPath& path, double v, PoissonEmbedding& embedding) {
    if (!(v > 0.0 && v < params.horizon)) throw std::domain_error("shift time outside (0, T)");
    EventPath out = path.prefix_before(v);
    out.events.push_back({v, EventTag::enforced, left_limit(params, out, v)});
    const auto tail = simulate_generalized(v, Baseline::excited(params.mu, out.times()), out, out.size(), params,
                                           embedding);
    append(out, tail.path);
    return out;
}

HawkesParams dominating_params(const HawkesParams& params, std::size_t n) {
    const double jump = params.kernel.non_increasing() ? params.kernel.at_zero() : params.kernel.sup_value();
    return HawkesParams(params.mu + static_cast<double>(n) * jump, params.kernel, params.horizon);
}

}  // namespace hawkes
