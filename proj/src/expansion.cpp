#include "hawkes/expansion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "hawkes/parallel.hpp"
#include "hawkes/shifted.hpp"
#include "hawkes/simd.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

namespace {

constexpr std::size_t kNodes = 32;

struct GaussRule {
    std::array<double, kNodes> x{};  // on [-1, 1]
    std::array<double, kNodes> w{};
};

const GaussRule& gauss_rule() {
    static const GaussRule rule = [] {
        using G = boost::math::quadrature::gauss<double, kNodes>;
        GaussRule r;
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        const std::size_t half = kNodes / 2;
        for (std::size_t i = 0; i < half; ++i) {
            r.x[half - 1 - i] = -a[i];
            r.w[half - 1 - i] = wt[i];
            r.x[half + i] = a[i];
            r.w[half + i] = wt[i];
        }
        return r;
    }();
    return rule;
}

// Nested quadrature in gap coordinates: with d_i = u_{i-1} - u_i,
// inner(k, u) = int_0^u Phi(d) inner(k-1, u-d) dd and m = int_0^T inner(n-1, v) dv.
class NestedQuadrature {
public:
    explicit NestedQuadrature(const Kernel& kernel) : kernel_(kernel) {
        const auto bp = kernel.breakpoints();
        if (bp.size() <= 2) breaks_ = bp;
    }

    double outer(double horizon, std::size_t gaps) const {
        return integrate(split_points(horizon, false), [&](double v) { return inner(gaps, v); }, false);
    }

private:
    double inner(std::size_t k, double u) const {
        if (k == 0) return 1.0;
        if (!(u > 0.0)) return 0.0;
        return integrate(split_points(u, true), [&](double d) { return inner(k - 1, u - d); }, true);
    }

    std::vector<double> split_points(double u, bool mirrored) const {
        std::vector<double> pts{0.0};
        for (const double b : breaks_) {
            if (b > 0.0 && b < u) pts.push_back(b);
            if (mirrored && u - b > 0.0 && u - b < u) pts.push_back(u - b);
        }
        pts.push_back(u);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

    template <class F>
    double integrate(const std::vector<double>& pts, F&& g, bool weighted) const {
        const auto& rule = gauss_rule();
        std::array<double, kNodes> wphi{};
        std::array<double, kNodes> vals{};
        double acc = 0.0;
        for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
            const double a = pts[s];
            const double b = pts[s + 1];
            const double half = 0.5 * (b - a);
            const double mid = 0.5 * (a + b);
            for (std::size_t j = 0; j < kNodes; ++j) {
                const double t = mid + half * rule.x[j];
                wphi[j] = half * rule.w[j] * (weighted ? kernel_.eval_unchecked(t) : 1.0);
                vals[j] = wphi[j] == 0.0 ? 0.0 : g(t);
            }
            acc += simd::dot(wphi, vals);
        }
        return acc;
    }

    const Kernel& kernel_;
    std::vector<double> breaks_;
};

double closed_form_mphi(const Kernel& kernel, double horizon, std::size_t n) {
    if (n == 1) return 1.0;
    if (kernel.is_zero()) return 0.0;
    const double vol = simplex_volume(horizon, n);
    if (const auto* c = std::get_if<ConstantKernel>(&kernel.family()))
        return std::pow(c->c, static_cast<double>(n - 1)) * vol;
    const auto& e = std::get<ExponentialKernel>(kernel.family());
    // prod Phi telescopes to alpha^{n-1} e^{-beta (u_1 - u_n)}; integrate over the span w = u_1 - u_n.
    const double a = static_cast<double>(n - 1);
    const double bt = e.beta * horizon;
    const double first = horizon * boost::math::gamma_p(a, bt) / std::pow(e.beta, a);
    const double second = a * boost::math::gamma_p(a + 1.0, bt) / std::pow(e.beta, a + 1.0);
    return std::pow(e.alpha, a) * (first - second);
}

}  // namespace

SimplexPoint sample_simplex(std::size_t n, double horizon, Engine& eng) {
    if (n == 0) throw std::invalid_argument("simplex order must be >= 1");
    SimplexPoint p;
    p.times.resize(n);
    const double top = std::nextafter(horizon, 0.0);
    for (;;) {
        for (auto& t : p.times) t = std::min(top, horizon * eng.uniform());
        std::sort(p.times.begin(), p.times.end(), std::greater<>());
        if (std::adjacent_find(p.times.begin(), p.times.end()) == p.times.end()) return p;
    }
}

SimplexPoint sample_simplex(std::size_t n, double horizon, const RngStream& rng) {
    Engine eng(rng);
    return sample_simplex(n, horizon, eng);
}

double kernel_chain(const Kernel& kernel, const std::vector<double>& desc) {
    double w = 1.0;
    for (std::size_t i = 1; i < desc.size() && w != 0.0; ++i) w *= kernel.eval_unchecked(desc[i - 1] - desc[i]);
    return w;
}

std::string method_name(MPhiMethod m) {
    switch (m) {
        case MPhiMethod::automatic: return "automatic";
        case MPhiMethod::quadrature: return "quadrature";
        case MPhiMethod::monte_carlo: return "monte_carlo";
        case MPhiMethod::closed_form: return "closed_form";
    }
    return "unknown";
}

double simplex_volume(double horizon, std::size_t n) {
    return std::exp(static_cast<double>(n) * std::log(horizon) - std::lgamma(static_cast<double>(n) + 1.0));
}

bool has_closed_form_mphi(const Kernel& kernel, double horizon) noexcept {
    if (kernel.is_zero()) return true;
    if (const auto* c = std::get_if<ConstantKernel>(&kernel.family())) return c->support >= horizon;
    return std::holds_alternative<ExponentialKernel>(kernel.family());
}

MPhiResult m_phi(const Kernel& kernel, double horizon, std::size_t n, const MPhiOptions& opt) {
    if (n == 0) throw std::invalid_argument("m_phi: order must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("m_phi: horizon must be > 0");
    MPhiMethod method = opt.method;
    if (n == 1) return {1.0, 0.0, MPhiMethod::closed_form};
    if (method == MPhiMethod::automatic) {
        if (n <= 4)
            method = MPhiMethod::quadrature;
        else if (has_closed_form_mphi(kernel, horizon))
            method = MPhiMethod::closed_form;
        else
            method = MPhiMethod::monte_carlo;
    }
    switch (method) {
        case MPhiMethod::closed_form:
            if (!has_closed_form_mphi(kernel, horizon))
                throw std::invalid_argument("m_phi: no closed form for kernel " + kernel.describe());
            return {closed_form_mphi(kernel, horizon, n), 0.0, method};
        case MPhiMethod::quadrature: {
            if (n > 4) throw std::invalid_argument("m_phi: nested quadrature limited to n <= 4");
            NestedQuadrature q(kernel);
            return {q.outer(horizon, n - 1), 0.0, method};
        }
        case MPhiMethod::monte_carlo: {
            if (opt.mc_samples < 2) throw std::invalid_argument("m_phi: at least two Monte Carlo samples required");
            const RngStream base = opt.stream.child(StreamDomain::mphi, n);
            const Stat st = parallel::reduce_stat(opt.mc_samples, [&](std::size_t i) {
                Engine eng(base.at(i));
                return kernel_chain(kernel, sample_simplex(n, horizon, eng).times);
            });
            const double vol = simplex_volume(horizon, n);
            return {vol * st.mean(), vol * st.stderr_of_mean(), method};
        }
        case MPhiMethod::automatic: break;
    }
    throw std::logic_error("m_phi: unresolved method");
}

double m_phi_upper_bound(const Kernel& kernel, double horizon, std::size_t n) {
    if (n == 0) throw std::invalid_argument("m_phi_upper_bound: order must be >= 1");
    if (n == 1) return horizon;
    return std::pow(kernel.sup_value(), static_cast<double>(n - 1)) * simplex_volume(horizon, n);
}

double remainder_bound(double z_sup, double f_sup, const HawkesParams& params, std::size_t M) {
    if (M == 0) throw std::invalid_argument("remainder_bound: M must be >= 1");
    const double phi_star = params.kernel.sup_value();
    if (phi_star == 0.0) return 0.0;
    return z_sup * f_sup * mean_intensity_bound(params) * std::pow(phi_star, static_cast<double>(M)) *
           simplex_volume(params.horizon, M + 1);
}

SeriesEstimate expansion_estimate(const PathFunctionalSpec& spec, const HawkesParams& params,
                                  const ExpansionOptions& opt, const RngStream& rng) {
    if (!spec.evaluate) throw std::invalid_argument("expansion: functional is empty");
    if (opt.samples_per_term < 2) throw std::invalid_argument("expansion: samples_per_term must be >= 2");
    const std::size_t max_order = opt.order ? opt.order : opt.max_order;
    const double T = params.horizon;
    const RngStream functional_root = rng.child(StreamDomain::claims);
    const double z_tol = spec.z_sup * (1.0 + 1e-12);
    const double f_tol = spec.f_sup * (1.0 + 1e-12);

    SeriesEstimate out;
    double partial = 0.0;
    for (std::size_t n = 1; n <= max_order; ++n) {
        const RngStream term_root = rng.child(StreamDomain::expansion, n);
        const Stat st = parallel::reduce_stat(opt.samples_per_term, [&](std::size_t i) {
            const RngStream s = term_root.at(i);
            Engine eng(s.child(StreamDomain::simplex));
            const SimplexPoint u = sample_simplex(n, T, eng);
            const double w = kernel_chain(params.kernel, u.times);
            if (w == 0.0) return 0.0;
            PoissonEmbedding embedding(s, T);
            const EventPath path = simulate_shifted(params, ShiftSpec::from_descending(u.times), embedding);
            const ZF zf = spec.evaluate(ShiftedSample{path, u.times, functional_root.at(i), n, i});
            if (!(std::abs(zf.z) <= z_tol) || !(std::abs(zf.f) <= f_tol)) {
                std::ostringstream os;
                os.precision(17);
                os << "functional exceeds declared bound at order " << n << ", sample " << i << ": Z=" << zf.z
                   << " (sup " << spec.z_sup << "), F=" << zf.f << " (sup " << spec.f_sup << ")";
                throw BoundViolation(os.str());
            }
            return w * zf.z * zf.f;
        });
        const double scale = params.mu * simplex_volume(T, n);
        out.terms.push_back({n, scale * st.mean(), scale * st.stderr_of_mean()});
        partial += out.terms.back().value;
        out.total_stderr += out.terms.back().std_error;
        const double rem = remainder_bound(spec.z_sup, spec.f_sup, params, n);
        out.truncation_order = n;
        out.remainder_bound = rem;
        if (!opt.order && (rem < opt.rel_target * std::abs(partial) || rem < 1e-15)) break;
    }
    out.total = partial;
    return out;
}

nlohmann::json to_json(const SeriesEstimate& s) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : s.terms) terms.push_back({{"n", t.n}, {"value", t.value}, {"stderr", t.std_error}});
    return {{"terms", terms},
            {"M", s.truncation_order},
            {"remainder", s.remainder_bound},
            {"total", s.total},
            {"total_stderr", s.total_stderr}};
}

}  // namespace hawkes
