#include "hawkes/validate.hpp"

#include <algorithm>
#include <cmath>

#include "hawkes/expansion.hpp"
#include "hawkes/oracle.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/pricing.hpp"
#include "hawkes/shifted.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/volterra.hpp"

namespace hawkes {

namespace {

using nlohmann::json;

struct Suite {
    json checks = json::array();
    std::size_t violations = 0;

    void add(const std::string& name, bool pass, json detail = json::object()) {
        detail["name"] = name;
        detail["pass"] = pass;
        if (!pass) ++violations;
        checks.push_back(std::move(detail));
    }
};

bool is_subset(const EventPath& small, const EventPath& big) {
    std::size_t j = 0;
    for (const auto& e : small.events) {
        while (j < big.size() && big.events[j].time < e.time) ++j;
        if (j == big.size() || big.events[j].time != e.time) return false;
    }
    return true;
}

bool well_formed(const EventPath& p, double horizon) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double t = p.events[i].time;
        if (!(t > 0.0 && t <= horizon)) return false;
        if (i > 0 && !(t > p.events[i - 1].time)) return false;
    }
    return true;
}

// Counts of pathwise violations over shared-stream paths, plus moment statistics.
struct PathwiseCounts {
    std::size_t malformed = 0;
    std::size_t base_not_subset = 0;
    std::size_t intensity_below_mu = 0;
    std::size_t shift_lower = 0;
    std::size_t shift_standard = 0;
    std::size_t shift_upper = 0;
    std::size_t prefix_mismatch = 0;
    std::size_t composition_mismatch = 0;
    std::size_t composition_checked = 0;

    void merge(const PathwiseCounts& o) {
        malformed += o.malformed;
        base_not_subset += o.base_not_subset;
        intensity_below_mu += o.intensity_below_mu;
        shift_lower += o.shift_lower;
        shift_standard += o.shift_standard;
        shift_upper += o.shift_upper;
        prefix_mismatch += o.prefix_mismatch;
        composition_mismatch += o.composition_mismatch;
        composition_checked += o.composition_checked;
    }
};

}  // namespace

json run_validation(const RunConfig& cfg, std::uint64_t seed) {
    const auto& params = cfg.params;
    const auto& num = cfg.numerics;
    const double T = params.horizon;
    const double z = num.validate_sigma;
    const std::size_t V = std::max<std::size_t>(num.validate_paths, 2);
    const RngStream root{seed, 0};
    const RngStream vroot = root.child(StreamDomain::validate);
    Suite suite;

    {
        bool ok = true;
        for (int i = 0; i <= 10000; ++i) ok = ok && params.kernel.eval(T * i / 10000.0) >= 0.0;
        const bool mono = !params.kernel.non_increasing() || scan_non_increasing(params.kernel, T);
        suite.add("kernel_non_negative", ok);
        suite.add("kernel_declared_monotonicity", mono);
    }

    // Shared-stream pathwise dominations.
    std::vector<HawkesParams> dominating;
    for (std::size_t n = 0; n <= 3; ++n) dominating.push_back(dominating_params(params, n));
    const std::size_t composition_paths = std::min<std::size_t>(V, 1000);
    const auto parts = parallel::map_chunks<PathwiseCounts>(V, [&](std::size_t b, std::size_t e) {
        PathwiseCounts c;
        for (std::size_t i = b; i < e; ++i) {
            const RngStream s = vroot.at(i);
            PoissonEmbedding emb(s, T);
            const EventPath hawkes = simulate_standard(params, emb);
            const EventPath base = simulate_poisson_base(params.mu, emb);
            if (!well_formed(hawkes, T)) ++c.malformed;
            if (!is_subset(base, hawkes)) ++c.base_not_subset;
            for (const auto& ev : hawkes.events)
                if (ev.intensity < params.mu) ++c.intensity_below_mu;

            const std::size_t n = 1 + i % 3;
            const auto u = sample_simplex(n, T, s.child(StreamDomain::shift_times));
            const ShiftSpec shifts = ShiftSpec::from_descending(u.times);
            const EventPath shifted = simulate_shifted(params, shifts, emb);
            if (!well_formed(shifted, T) || shifted.count(EventTag::enforced) != n) ++c.malformed;
            const EventPath dom = simulate_standard(dominating[n], emb);
            if (shifted.size() < n + base.size()) ++c.shift_lower;
            if (shifted.size() < n + hawkes.size()) ++c.shift_standard;
            if (shifted.size() > n + dom.size()) ++c.shift_upper;
            if (shifted.prefix_before(shifts.times.front()) != hawkes.prefix_before(shifts.times.front()))
                ++c.prefix_mismatch;

            if (i < composition_paths) {
                const auto pair = sample_simplex(2, T, s.child(StreamDomain::shift_times, 1));
                PoissonEmbedding e1(s, T);
                const EventPath direct = simulate_shifted(params, ShiftSpec::from_descending(pair.times), e1);
                PoissonEmbedding e2(s, T);
                const EventPath once = simulate_shifted(params, ShiftSpec({pair.times[1]}), e2);
                const EventPath composed = reshift(params, once, pair.times[0], e2);
                ++c.composition_checked;
                if (!(direct == composed)) ++c.composition_mismatch;
            }
        }
        return c;
    });
    PathwiseCounts pc;
    for (const auto& p : parts) pc.merge(p);
    suite.add("paths_well_formed", pc.malformed == 0, {{"violations", pc.malformed}, {"paths", V}});
    suite.add("poisson_base_subset", pc.base_not_subset == 0, {{"violations", pc.base_not_subset}, {"paths", V}});
    suite.add("intensity_at_least_mu", pc.intensity_below_mu == 0, {{"violations", pc.intensity_below_mu}});
    suite.add("shifted_above_base", pc.shift_lower == 0, {{"violations", pc.shift_lower}});
    suite.add("shifted_above_standard", pc.shift_standard == 0, {{"violations", pc.shift_standard}});
    suite.add("shifted_below_dominating", pc.shift_upper == 0, {{"violations", pc.shift_upper}});
    suite.add("shifted_prefix_identity", pc.prefix_mismatch == 0, {{"violations", pc.prefix_mismatch}});
    suite.add("shift_composition", pc.composition_mismatch == 0,
              {{"violations", pc.composition_mismatch}, {"pairs", pc.composition_checked}});

    // Volterra invariants and moments.
    const double step = num.volterra_step > 0.0 ? num.volterra_step : default_volterra_step(T);
    const auto psi1 = solve_volterra_psi1(params.kernel, T, step);
    const auto psi2 = solve_volterra_psi2(params.kernel, psi1, T, step);
    {
        bool ok = true;
        for (std::size_t i = 0; i < psi1.values.size(); ++i) {
            const double p1 = psi1.values[i];
            const double p2 = psi2.values[i];
            ok = ok && p1 >= 1.0 - 1e-12 && p2 >= p1 * p1 * (1.0 - 1e-12);
            if (i > 0) ok = ok && p1 >= psi1.values[i - 1] * (1.0 - 1e-12) && p2 >= psi2.values[i - 1] * (1.0 - 1e-12);
        }
        suite.add("volterra_invariants", ok, {{"psi1_T", psi1.back()}, {"psi2_T", psi2.back()}});
        const auto coarse = moment_constants(params.kernel, T, step, params.mu);
        const auto fine = moment_constants(params.kernel, T, step / 2.0, params.mu);
        const double d1 = std::abs(fine.C1 - coarse.C1) / coarse.C1;
        const double d2 = std::abs(fine.C2 - coarse.C2) / coarse.C2;
        suite.add("volterra_step_halving", d1 < 1e-5 && d2 < 1e-5,
                  {{"C1", coarse.C1}, {"C2", coarse.C2}, {"rel_change_C1", d1}, {"rel_change_C2", d2}});
    }
    const auto moments = moment_constants(params.kernel, T, step, params.mu);
    {
        constexpr int kGrid = 10;
        const auto st = parallel::reduce_stats(V, 2 + kGrid, [&](std::size_t i, double* out) {
            const EventPath p = simulate_standard(params, vroot.at(i));
            const double n = static_cast<double>(p.size());
            out[0] = n;
            out[1] = n * n;
            for (int k = 1; k <= kGrid; ++k) out[1 + k] = intensity_at(params, p, T * k / kGrid);
        });
        const double se1 = st[0].stderr_of_mean();
        suite.add("first_moment", std::abs(st[0].mean() - moments.first_moment) <= z * se1 + 1e-6,
                  {{"simulated", st[0].mean()}, {"stderr", se1}, {"volterra", moments.first_moment}});
        const double se2 = st[1].stderr_of_mean();
        suite.add("second_moment", std::abs(st[1].mean() - moments.second_moment) <= z * se2 + 1e-6,
                  {{"simulated", st[1].mean()}, {"stderr", se2}, {"volterra", moments.second_moment}});
        const double bound = mean_intensity_bound(params);
        bool ok = true;
        double worst = -1e300;
        for (int k = 1; k <= kGrid; ++k) {
            const double lo = st[1 + k].mean() - z * st[1 + k].stderr_of_mean();
            ok = ok && lo <= bound;
            worst = std::max(worst, st[1 + k].mean());
        }
        suite.add("mean_intensity_bound", ok, {{"bound", bound}, {"max_mean_intensity", worst}});
    }

    {
        MPhiOptions mo;
        mo.method = num.mphi_method;
        mo.mc_samples = num.mphi_samples;
        mo.stream = root;
        bool ok = true;
        json rows = json::array();
        for (std::size_t n = 1; n <= num.mphi_order; ++n) {
            MPhiOptions o = mo;
            if (o.method == MPhiMethod::quadrature && n > 4) o.method = MPhiMethod::automatic;
            const auto r = m_phi(params.kernel, T, n, o);
            const double ub = m_phi_upper_bound(params.kernel, T, n);
            ok = ok && r.value <= ub * (1.0 + 1e-12) + z * r.std_error;
            rows.push_back({{"n", n}, {"value", r.value}, {"stderr", r.std_error}, {"upper_bound", ub}});
        }
        suite.add("mphi_below_upper_bound", ok, {{"table", rows}});
    }

    if (cfg.contract && cfg.contract->h.bounded()) {
        const auto& contract = *cfg.contract;
        const std::uint64_t oseed = root.child(StreamDomain::oracle).key();
        const auto oracle = mc_premium(contract, params, cfg.model, num.paths, oseed);
        BoundOptions bo;
        bo.n_terms = num.n_terms;
        bo.p_max = num.p_max;
        bo.samples = num.bound_samples;
        bo.volterra_step = num.volterra_step;
        bo.mphi.mc_samples = num.mphi_samples;
        bo.mphi.stream = root;
        const auto bounds = premium_bounds(contract, params, cfg.model, bo, root);
        const double tol = 1e-12 * std::max(1.0, std::abs(bounds.lower_poisson.mean));
        suite.add("lower_simple_below_lower_poisson", bounds.lower_simple.mean <= bounds.lower_poisson.mean + tol,
                  {{"lower_simple", bounds.lower_simple.mean}, {"lower_poisson", bounds.lower_poisson.mean}});
        const double sl = std::hypot(oracle.std_error, bounds.lower_poisson.std_error);
        suite.add("lower_poisson_below_oracle", bounds.lower_poisson.mean <= oracle.mean + z * sl,
                  {{"lower_poisson", bounds.lower_poisson.mean}, {"oracle", oracle.mean}, {"sigma", sl}});
        const double su = std::hypot(oracle.std_error, bounds.upper.std_error);
        suite.add("upper_above_oracle", bounds.upper.mean >= oracle.mean - z * su,
                  {{"upper", bounds.upper.mean}, {"oracle", oracle.mean}, {"sigma", su}});

        ExpansionOptions eo;
        eo.order = num.order;
        eo.max_order = num.max_order;
        eo.samples_per_term = num.samples_per_term;
        const auto series = premium_expansion(contract, params, cfg.model, eo, root, num.inner_draws);
        const double ss = series.total_stderr + oracle.std_error;
        suite.add("series_bracket", std::abs(series.total - oracle.mean) <= series.remainder_bound + z * ss,
                  {{"series", series.total},
                   {"remainder", series.remainder_bound},
                   {"M", series.truncation_order},
                   {"oracle", oracle.mean},
                   {"sigma", ss}});
        if (contract.has_band()) {
            const auto d = premium_decomposition_mc(contract, params, cfg.model, num.paths, oseed);
            suite.checks.push_back({{"name", "decomposition_discrepancy"},
                                    {"pass", true},
                                    {"informational", true},
                                    {"delta", d.delta},
                                    {"band_delta", d.band_delta}});
        }
    }

    return {{"command", "validate"},
            {"seed", seed},
            {"sigma", z},
            {"checks", suite.checks},
            {"violations", suite.violations},
            {"config", cfg.echo}};
}

}  // namespace hawkes
