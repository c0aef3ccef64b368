#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkes {

PoissonEmbedding::PoissonEmbedding(RngStream stream, double horizon, double band_height)
    : stream_(stream), horizon_(horizon), band_height_(band_height) {
    if (!(horizon > 0.0)) throw std::invalid_argument("embedding horizon must be > 0");
    if (!(band_height > 0.0)) throw std::invalid_argument("embedding band height must be > 0");
}

const std::vector<PoissonEmbedding::Point>& PoissonEmbedding::band(std::size_t k) {
    if (k >= bands_.size()) {
        bands_.resize(k + 1);
        generated_.resize(k + 1, false);
    }
    if (!generated_[k]) {
        Engine eng(stream_.child(StreamDomain::embedding, k));
        auto& pts = bands_[k];
        const double lo = static_cast<double>(k) * band_height_;
        double t = 0.0;
        for (;;) {
            t += eng.exponential(band_height_);
            if (t > horizon_) break;
            pts.push_back({t, lo + band_height_ * eng.uniform()});
        }
        generated_[k] = true;
    }
    return bands_[k];
}

std::vector<PoissonEmbedding::Point> PoissonEmbedding::points_below(double level) {
    std::vector<Point> out;
    if (!(level > 0.0)) return out;
    const auto bands = static_cast<std::size_t>(std::ceil(level / band_height_));
    for (std::size_t k = 0; k < bands; ++k)
        for (const auto& p : band(k))
            if (p.mark <= level) out.push_back(p);
    std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) { return a.time < b.time; });
    return out;
}

Baseline Baseline::constant(double mu) {
    if (!(mu >= 0.0)) throw std::domain_error("baseline intensity must be >= 0");
    Baseline b;
    b.kind_ = Kind::constant;
    b.mu_ = mu;
    return b;
}

Baseline Baseline::excited(double mu, std::vector<double> sources) {
    if (!(mu >= 0.0)) throw std::domain_error("baseline intensity must be >= 0");
    Baseline b;
    b.kind_ = Kind::excited;
    b.mu_ = mu;
    b.sources_ = std::move(sources);
    return b;
}

Baseline Baseline::custom(std::function<double(double)> rate, std::function<double(double)> sup_after) {
    Baseline b;
    b.kind_ = Kind::custom;
    b.rate_ = std::move(rate);
    b.sup_after_ = std::move(sup_after);
    return b;
}

double Baseline::rate(const Kernel& kernel, double t) const {
    switch (kind_) {
        case Kind::constant: return mu_;
        case Kind::excited: {
            double acc = mu_;
            for (const double s : sources_) acc += kernel.eval_unchecked(t - s);
            return acc;
        }
        case Kind::custom: {
            const double r = rate_(t);
            if (!(r >= 0.0)) throw std::domain_error("baseline rate is negative");
            return r;
        }
    }
    return 0.0;
}

double Baseline::bound_after(const Kernel& kernel, double t) const {
    switch (kind_) {
        case Kind::constant: return mu_;
        case Kind::excited:
            if (kernel.non_increasing()) return rate(kernel, t);
            return mu_ + static_cast<double>(sources_.size()) * kernel.sup_value();
        case Kind::custom: return sup_after_(t);
    }
    return 0.0;
}

double Baseline::spontaneous_level(const Kernel& kernel, double t) const {
    return kind_ == Kind::custom ? rate(kernel, t) : mu_;
}

EventPath thin(PoissonEmbedding& embedding, const Kernel& kernel, const Baseline& baseline, double start,
               double stop, bool include_stop) {
    EventPath out;
    const double height = embedding.band_height();
    const bool monotone = kernel.non_increasing();
    const double phi_sup = kernel.sup_value();
    std::vector<std::size_t> cursor;
    double t = start;

    for (;;) {
        // Dominating level valid on (t, next acceptance].
        double bar = baseline.bound_after(kernel, t);
        if (monotone) {
            for (const auto& e : out.events) bar += kernel.eval_unchecked(t - e.time);
        } else {
            bar += static_cast<double>(out.events.size()) * phi_sup;
        }
        if (!(bar > 0.0)) break;
        bar = bar * (1.0 + 1e-12) + std::numeric_limits<double>::min();

        const auto bands = static_cast<std::size_t>(std::ceil(bar / height));
        if (cursor.size() < bands) cursor.resize(bands, 0);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_k = 0;
        for (std::size_t k = 0; k < bands; ++k) {
            const auto& pts = embedding.band(k);
            std::size_t c = cursor[k];
            while (c < pts.size() && pts[c].time <= t) ++c;
            cursor[k] = c;
            if (c < pts.size() && pts[c].time < best) {
                best = pts[c].time;
                best_k = k;
            }
        }
        if (include_stop ? !(best <= stop) : !(best < stop)) break;

        const auto point = embedding.band(best_k)[cursor[best_k]];
        ++cursor[best_k];
        t = point.time;
        if (point.mark > bar) continue;

        double lambda = baseline.rate(kernel, t);
        for (const auto& e : out.events) lambda += kernel.eval_unchecked(t - e.time);
        if (point.mark <= lambda) {
            const EventTag tag = point.mark <= baseline.spontaneous_level(kernel, t) ? EventTag::spontaneous
                                                                                      : EventTag::excited;
            out.events.push_back({t, tag, lambda});
        }
    }
    return out;
}

double intensity_at(const HawkesParams& params, const EventPath& path, double t) {
    if (!(t > 0.0 && t <= params.horizon)) throw std::domain_error("intensity_at: t must lie in (0, T]");
    double acc = params.mu;
    for (const auto& e : path.events) {
        if (!(e.time < t)) break;
        acc += params.kernel.eval_unchecked(t - e.time);
    }
    return acc;
}

EventPath simulate_standard(const HawkesParams& params, PoissonEmbedding& embedding) {
    return thin(embedding, params.kernel, Baseline::constant(params.mu), 0.0, params.horizon, true);
}

EventPath simulate_standard(const HawkesParams& params, const RngStream& rng) {
    PoissonEmbedding embedding(rng, params.horizon);
    return simulate_standard(params, embedding);
}

GeneralizedPath simulate_generalized(double start, const Baseline& baseline, const EventPath& history,
                                     std::size_t initial_count, const HawkesParams& params,
                                     PoissonEmbedding& embedding) {
    if (!(start >= 0.0 && start <= params.horizon)) throw std::domain_error("generalized start must lie in [0, T]");
    for (const auto& e : history.events)
        if (e.time > start) throw std::domain_error("history contains events after the start time");
    constexpr int kChecks = 1000;
    for (int i = 0; i <= kChecks; ++i) {
        const double t = start + (params.horizon - start) * i / kChecks;
        (void)baseline.rate(params.kernel, t);  // throws if negative
    }
    GeneralizedPath out;
    out.initial_count = initial_count;
    out.path = thin(embedding, params.kernel, baseline, start, params.horizon, true);
    return out;
}

GeneralizedPath simulate_generalized(double start, const Baseline& baseline, const EventPath& history,
                                     std::size_t initial_count, const HawkesParams& params, const RngStream& rng) {
    PoissonEmbedding embedding(rng, params.horizon);
    return simulate_generalized(start, baseline, history, initial_count, params, embedding);
}

EventPath simulate_poisson_base(double mu, PoissonEmbedding& embedding) {
    if (!(mu >= 0.0)) throw std::domain_error("poisson base rate must be >= 0");
    EventPath out;
    for (const auto& p : embedding.points_below(mu)) out.events.push_back({p.time, EventTag::spontaneous, mu});
    return out;
}

EventPath simulate_poisson_base(double mu, double horizon, const RngStream& rng) {
    PoissonEmbedding embedding(rng, horizon);
    return simulate_poisson_base(mu, embedding);
}

}  // namespace hawkes
