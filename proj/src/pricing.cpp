#include "hawkes/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "hawkes/parallel.hpp"
#include "hawkes/simd.hpp"

namespace hawkes {

namespace {

double poisson_pmf(double lambda, std::size_t p) {
    if (lambda == 0.0) return p == 0 ? 1.0 : 0.0;
    const double k = static_cast<double>(p);
    return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

// P[Poisson(lambda) >= j]
double poisson_at_least(double lambda, long long j) {
    if (j <= 0) return 1.0;
    if (lambda == 0.0) return 0.0;
    return boost::math::gamma_p(static_cast<double>(j), lambda);
}

void require_bound_contract(const Contract& contract, const ClaimModel& model) {
    if (!contract.h.bounded()) throw std::invalid_argument("bounds require a bounded payoff h");
    if (!contract.h.non_decreasing()) throw std::invalid_argument("bounds require a non-decreasing payoff h");
    model.validate();
}

double beta_factor(double horizon, double mu_n, double cn, std::size_t p_max) {
    double acc = std::exp(-horizon * mu_n);
    for (std::size_t p = 1; p <= p_max; ++p) acc += std::min(cn / static_cast<double>(p * p), 1.0);
    return acc + cn / static_cast<double>(p_max);
}

struct BoundContext {
    const Contract& contract;
    const HawkesParams& params;
    const ClaimModel& model;
    const BoundOptions& opt;
    const RngStream& rng;
    double sup_gh;
    double jump;
    MomentConstants moments;
    std::vector<double> mphi;  // index n, entry 0 unused
    std::vector<double> mphi_upper;

    double mu_n(std::size_t n) const { return params.mu + static_cast<double>(n) * jump; }
    double c_n(std::size_t n) const {
        const double m = mu_n(n);
        return m * moments.C1 + m * m * moments.C2;
    }
    double mphi_at(std::size_t n) {
        while (mphi.size() <= n) {
            const std::size_t k = mphi.size();
            const auto r = m_phi(params.kernel, params.horizon, k, opt.mphi);
            // Monte Carlo values are replaced by the analytic upper bound where a true bound is needed.
            mphi.push_back(r.value);
            mphi_upper.push_back(r.method == MPhiMethod::monte_carlo
                                     ? m_phi_upper_bound(params.kernel, params.horizon, k)
                                     : r.value);
        }
        return mphi[n];
    }
    double upper_proxy(std::size_t n) const {
        return params.mu * m_phi_upper_bound(params.kernel, params.horizon, n) * sup_gh *
               beta_factor(params.horizon, mu_n(n), c_n(n), opt.p_max);
    }
    double lower_proxy(std::size_t n) const {
        return params.mu * m_phi_upper_bound(params.kernel, params.horizon, n) * sup_gh;
    }
};

// kappa = 0: every bound is mu sum_m coeff(m) A(m) with A(m) = E[g(X_1) h(X_1 + ... + X_m)].
void bounds_undiscounted(BoundContext& ctx, PremiumBounds& out) {
    const auto& model = ctx.model;
    const auto& h = ctx.contract.h;
    const double T = ctx.params.horizon;
    const double mu = ctx.params.mu;
    const double lambda = mu * T;
    const std::size_t P = ctx.opt.p_max;
    const std::size_t samples = model.deterministic() ? 1 : ctx.opt.samples;
    const RngStream root = ctx.rng.child(StreamDomain::bounds, 0);

    // h(S_m) g(X_1) for m = 1..len, written to buf[m-1].
    auto fill = [&](std::size_t s, std::size_t len, double* buf) {
        Engine eng(root.at(s));
        const Mark first = model.draw(eng);
        const double g = model.g(first);
        double S = model.f(first);
        buf[0] = g * h(S);
        for (std::size_t m = 2; m <= len; ++m) {
            S += model.f(model.draw(eng));
            buf[m - 1] = g * h(S);
        }
    };

    std::size_t N = ctx.opt.n_terms;
    if (N == 0) {
        const std::size_t len = ctx.opt.max_terms + P;
        const auto A = parallel::reduce_stats(samples, len, [&](std::size_t s, double* buf) { fill(s, len, buf); });
        double lp = 0.0;
        double up = 0.0;
        for (std::size_t n = 1;; ++n) {
            const double m = ctx.mphi_at(n);
            double a = 0.0;
            for (std::size_t p = 0; p <= P; ++p) a += poisson_pmf(lambda, p) * A[n + p - 1].mean();
            lp += mu * m * a;
            double b = std::exp(-T * ctx.mu_n(n)) * A[n - 1].mean();
            for (std::size_t p = 1; p <= P; ++p)
                b += std::min(ctx.c_n(n) / static_cast<double>(p * p), 1.0) * A[n + p - 1].mean();
            up += mu * m * b;
            N = n;
            if (n == ctx.opt.max_terms) break;
            if (ctx.lower_proxy(n + 1) <= ctx.opt.rel_target * lp && ctx.upper_proxy(n + 1) <= ctx.opt.rel_target * up)
                break;
        }
    }
    const std::size_t len = N + P;
    std::vector<double> c_simple(len, 0.0);
    std::vector<double> c_poisson(len, 0.0);
    std::vector<double> c_upper(len, 0.0);
    double addon = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        const double m = ctx.mphi_at(n);
        const double cn = ctx.c_n(n);
        c_simple[n - 1] += m;
        for (std::size_t p = 0; p <= P; ++p) c_poisson[n + p - 1] += m * poisson_pmf(lambda, p);
        c_upper[n - 1] += ctx.mphi_upper[n] * std::exp(-T * ctx.mu_n(n));
        for (std::size_t p = 1; p <= P; ++p)
            c_upper[n + p - 1] += ctx.mphi_upper[n] * std::min(cn / static_cast<double>(p * p), 1.0);
        addon += mu * ctx.mphi_upper[n] * cn * ctx.sup_gh / static_cast<double>(P);
    }
    const auto st = parallel::reduce_stats(samples, 3, [&](std::size_t s, double* y) {
        std::vector<double> buf(len);
        fill(s, len, buf.data());
        y[0] = mu * simd::dot(c_simple, buf);
        y[1] = mu * simd::dot(c_poisson, buf);
        y[2] = mu * simd::dot(c_upper, buf);
    });
    out.lower_simple = {st[0].mean(), st[0].stderr_of_mean()};
    out.lower_poisson = {st[1].mean(), st[1].stderr_of_mean()};
    out.upper = {st[2].mean() + addon, st[2].stderr_of_mean()};
    out.upper_tail_addon = addon;
    out.n_terms = N;
}

// kappa > 0: Monte Carlo over simplex points, one independent reduction per order n.
void bounds_discounted(BoundContext& ctx, PremiumBounds& out) {
    const auto& model = ctx.model;
    const auto& h = ctx.contract.h;
    const auto& kernel = ctx.params.kernel;
    const double T = ctx.params.horizon;
    const double mu = ctx.params.mu;
    const double lambda = mu * T;
    const std::size_t P = ctx.opt.p_max;
    std::vector<double> pmf(P + 1);
    for (std::size_t p = 0; p <= P; ++p) pmf[p] = poisson_pmf(lambda, p);

    double sums[3] = {0.0, 0.0, 0.0};
    double vars[3] = {0.0, 0.0, 0.0};
    double addon = 0.0;
    const std::size_t n_max = ctx.opt.n_terms ? ctx.opt.n_terms : ctx.opt.max_terms;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double cn = ctx.c_n(n);
        const double e0 = std::exp(-T * ctx.mu_n(n));
        const double scale = mu * simplex_volume(T, n);
        const RngStream root = ctx.rng.child(StreamDomain::bounds, n);
        const auto st = parallel::reduce_stats(ctx.opt.samples, 3, [&](std::size_t s, double* y) {
            Engine eng(root.at(s));
            const SimplexPoint v = sample_simplex(n, T, eng);
            const double w = scale * model.discount(T, v.times[0]) * kernel_chain(kernel, v.times);
            if (w == 0.0) return;
            const Mark first = model.draw(eng);
            const double g = model.g(first);
            double base = model.discount(T, v.times[0]) * model.f(first);
            for (std::size_t k = 1; k < n; ++k) base += model.discount(T, v.times[k]) * model.f(model.draw(eng));
            const double hb = h(base);
            double lp = pmf[0] * hb;
            double up = e0 * hb;
            double s_disc = base;
            double s_flat = base;
            for (std::size_t p = 1; p <= P; ++p) {
                const double t = T * eng.uniform();
                const double fx = model.f(model.draw(eng));
                s_disc += model.discount(T, t) * fx;
                s_flat += fx;
                lp += pmf[p] * h(s_disc);
                up += std::min(cn / static_cast<double>(p * p), 1.0) * h(s_flat);
            }
            y[0] = w * g * hb;
            y[1] = w * g * lp;
            y[2] = w * g * up;
        });
        ctx.mphi_at(n);
        addon += mu * ctx.mphi_upper[n] * cn * ctx.sup_gh / static_cast<double>(P);
        for (int b = 0; b < 3; ++b) {
            sums[b] += st[b].mean();
            vars[b] += st[b].variance() / static_cast<double>(st[b].n);
        }
        out.n_terms = n;
        if (!ctx.opt.n_terms && ctx.lower_proxy(n + 1) <= ctx.opt.rel_target * sums[1] &&
            ctx.upper_proxy(n + 1) <= ctx.opt.rel_target * (sums[2] + addon))
            break;
    }
    out.lower_simple = {sums[0], std::sqrt(vars[0])};
    out.lower_poisson = {sums[1], std::sqrt(vars[1])};
    out.upper = {sums[2] + addon, std::sqrt(vars[2])};
    out.upper_tail_addon = addon;
}

}  // namespace

PathFunctionalSpec premium_functional(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                                      std::size_t inner_draws) {
    if (!contract.h.bounded()) throw std::invalid_argument("premium expansion requires a bounded payoff h");
    model.validate();
    if (inner_draws == 0) throw std::invalid_argument("premium expansion needs at least one inner draw");
    PathFunctionalSpec spec;
    spec.z_sup = model.g.sup();
    spec.f_sup = contract.h.sup();
    const std::size_t R = model.deterministic() ? 1 : inner_draws;
    const double T = params.horizon;
    spec.evaluate = [contract, model, R, T](const ShiftedSample& s) -> ZF {
        Engine first_eng(s.stream.child(StreamDomain::bar_claims, 0));
        const Mark first = model.draw(first_eng);
        const double d1 = model.discount(T, s.shifts[0]);
        const double z = d1 * model.g(first);
        const double base = d1 * model.f(first);
        double acc = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            ClaimSequence bar(model, s.stream.child(StreamDomain::bar_claims, 1 + r));
            ClaimSequence ordinary(model, s.stream.child(StreamDomain::claims, r));
            double x = base;
            for (std::size_t k = 1; k < s.shifts.size(); ++k) x += model.discount(T, s.shifts[k]) * model.f(bar[k - 1]);
            std::size_t j = 0;
            for (const auto& e : s.path.events) {
                if (e.tag == EventTag::enforced) continue;
                x += model.discount(T, e.time) * model.f(ordinary[j++]);
            }
            acc += contract.h(x);
        }
        return {z, acc / static_cast<double>(R)};
    };
    return spec;
}

SeriesEstimate premium_expansion(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                                 const ExpansionOptions& opt, const RngStream& rng, std::size_t inner_draws) {
    return expansion_estimate(premium_functional(contract, params, model, inner_draws), params, opt, rng);
}

PoissonSurplus poisson_surplus(const SeriesEstimate& series) {
    PoissonSurplus out;
    for (const auto& t : series.terms) {
        if (t.n == 1) {
            out.poisson_part += t.value;
        } else {
            out.surplus_part += t.value;
            out.surplus_stderr += t.std_error;
        }
    }
    return out;
}

PremiumBounds premium_bounds(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                             const BoundOptions& opt, const RngStream& rng) {
    require_bound_contract(contract, model);
    if (opt.p_max == 0) throw std::invalid_argument("bounds: p_max must be >= 1");
    if (opt.samples == 0) throw std::invalid_argument("bounds: samples must be >= 1");
    const double step = opt.volterra_step > 0.0 ? opt.volterra_step : default_volterra_step(params.horizon);
    BoundContext ctx{contract,
                     params,
                     model,
                     opt,
                     rng,
                     model.g.sup() * contract.h.sup(),
                     params.kernel.non_increasing() ? params.kernel.at_zero() : params.kernel.sup_value(),
                     moment_constants(params.kernel, params.horizon, step, params.mu),
                     {0.0},
                     {0.0}};
    PremiumBounds out;
    out.p_max = opt.p_max;
    out.kernel_non_increasing = params.kernel.non_increasing();
    out.moments = ctx.moments;
    out.poisson_tail_mass = boost::math::gamma_p(static_cast<double>(opt.p_max) + 1.0, params.mu * params.horizon);
    if (model.kappa == 0.0)
        bounds_undiscounted(ctx, out);
    else
        bounds_discounted(ctx, out);
    out.series_tail_proxy = ctx.upper_proxy(out.n_terms + 1);
    out.mphi.assign(ctx.mphi.begin() + 1, ctx.mphi.begin() + 1 + static_cast<std::ptrdiff_t>(out.n_terms));
    for (std::size_t n = 1; n <= out.n_terms; ++n) out.c_n.push_back(ctx.c_n(n));
    return out;
}

Estimate lower_bound_simple(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                            const BoundOptions& opt, const RngStream& rng) {
    return premium_bounds(contract, params, model, opt, rng).lower_simple;
}

Estimate lower_bound_poisson(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                             const BoundOptions& opt, const RngStream& rng) {
    return premium_bounds(contract, params, model, opt, rng).lower_poisson;
}

Estimate upper_bound(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                     const BoundOptions& opt, const RngStream& rng) {
    return premium_bounds(contract, params, model, opt, rng).upper;
}

DeductibleSurplus deductible_surplus_lower_bound(double mu, double mean_g, double attachment, double f_lo,
                                                 const Kernel& kernel, double horizon, std::size_t n_terms,
                                                 const MPhiOptions& mphi) {
    if (!(f_lo > 0.0)) throw std::domain_error("deductible: severity floor must be > 0");
    if (!(mu > 0.0) || !(horizon > 0.0)) throw std::domain_error("deductible: mu and horizon must be > 0");
    if (!(mean_g >= 0.0)) throw std::domain_error("deductible: mean compensation must be >= 0");
    DeductibleSurplus out;
    out.trigger_count = static_cast<long long>(std::floor(attachment / f_lo)) + 1;
    out.has_closed_form = kernel.non_increasing();
    const double lambda = mu * horizon;
    const double phi_T = kernel.eval_unchecked(horizon);
    const std::size_t n_max = n_terms ? n_terms : 60;
    double acc = 0.0;
    double closed = 0.0;
    for (std::size_t n = 2; n <= n_max; ++n) {
        const double q = poisson_at_least(lambda, out.trigger_count - static_cast<long long>(n));
        acc += m_phi(kernel, horizon, n, mphi).value * q;
        if (out.has_closed_form) closed += std::pow(phi_T, static_cast<double>(n - 1)) * simplex_volume(horizon, n) * q;
        out.n_terms = n;
        if (!n_terms && mu * mean_g * m_phi_upper_bound(kernel, horizon, n + 1) <= 1e-15 * mu * mean_g * acc) break;
    }
    out.value = mu * mean_g * acc;
    out.closed_form = out.has_closed_form ? mu * mean_g * closed : 0.0;
    return out;
}

nlohmann::json to_json(const PremiumBounds& b) {
    auto e = [](const Estimate& x) { return nlohmann::json{{"value", x.mean}, {"stderr", x.std_error}}; };
    return {{"lower_simple", e(b.lower_simple)},
            {"lower_poisson", e(b.lower_poisson)},
            {"upper", e(b.upper)},
            {"n_terms", b.n_terms},
            {"p_max", b.p_max},
            {"poisson_tail_mass", b.poisson_tail_mass},
            {"upper_tail_addon", b.upper_tail_addon},
            {"series_tail_proxy", b.series_tail_proxy},
            {"kernel_non_increasing", b.kernel_non_increasing},
            {"C1", b.moments.C1},
            {"C2", b.moments.C2},
            {"mphi", b.mphi},
            {"c_n", b.c_n}};
}

nlohmann::json to_json(const DeductibleSurplus& d) {
    nlohmann::json j{{"value", d.value}, {"n_terms", d.n_terms}, {"trigger_count", d.trigger_count}};
    if (d.has_closed_form) j["closed_form"] = d.closed_form;
    return j;
}

}  // namespace hawkes
