#pragma once

// Premium E[K_T h(L_T)] through the shifted-process expansion, its lower and
// upper bounds, and the deductible surplus bound.

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "hawkes/claims.hpp"
#include "hawkes/expansion.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/volterra.hpp"

namespace hawkes {

inline constexpr std::size_t kDefaultInnerDraws = 64;

/// Z = e^{-kappa (T - v_1)} g(bar eta_1, bar theta_1) and
/// F = mean over inner mark draws of h(enforced bar claims + claims at the other jumps).
PathFunctionalSpec premium_functional(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                                      std::size_t inner_draws = kDefaultInnerDraws);

SeriesEstimate premium_expansion(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                                 const ExpansionOptions& opt, const RngStream& rng,
                                 std::size_t inner_draws = kDefaultInnerDraws);

struct PoissonSurplus {
    double poisson_part = 0.0;  // n = 1 term
    double surplus_part = 0.0;  // n >= 2 terms
    double surplus_stderr = 0.0;
};

PoissonSurplus poisson_surplus(const SeriesEstimate& series);

struct BoundOptions {
    /// 0 selects the number of series terms automatically.
    std::size_t n_terms = 0;
    std::size_t max_terms = 60;
    double rel_target = 1e-6;
    std::size_t p_max = 200;
    /// Outer samples of claim marks (kappa = 0) or simplex points per term (kappa > 0).
    std::size_t samples = 20000;
    double volterra_step = 0.0;  // 0 means T / 2000
    MPhiOptions mphi;
};

struct PremiumBounds {
    Estimate lower_simple;
    Estimate lower_poisson;
    Estimate upper;
    std::size_t n_terms = 0;
    std::size_t p_max = 0;
    /// Poisson mass beyond p_max dropped from the lower bound.
    double poisson_tail_mass = 0.0;
    /// c_n sup g sup h / p_max contributions included in `upper`.
    double upper_tail_addon = 0.0;
    /// Bound on the first dropped series term of the upper bound.
    double series_tail_proxy = 0.0;
    bool kernel_non_increasing = true;
    MomentConstants moments;  // with mu_eff = mu
    std::vector<double> mphi;
    std::vector<double> c_n;
};

/// All three bounds from shared mark draws. Requires a bounded non-decreasing h.
PremiumBounds premium_bounds(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                             const BoundOptions& opt, const RngStream& rng);

Estimate lower_bound_simple(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                            const BoundOptions& opt, const RngStream& rng);
Estimate lower_bound_poisson(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                             const BoundOptions& opt, const RngStream& rng);
Estimate upper_bound(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                     const BoundOptions& opt, const RngStream& rng);

struct DeductibleSurplus {
    double value = 0.0;
    /// Same series with m_Phi(Delta^n) replaced by Phi(T)^{n-1} T^n / n!; set
    /// only for non-increasing kernels.
    double closed_form = 0.0;
    bool has_closed_form = false;
    std::size_t n_terms = 0;
    /// floor(K / f_lo) + 1: total count needed to trigger.
    long long trigger_count = 0;
};

/// mu E[g] sum_{n>=2} m_Phi(Delta^n) P[Poisson(mu T) >= trigger_count - n].
DeductibleSurplus deductible_surplus_lower_bound(double mu, double mean_g, double attachment, double f_lo,
                                                 const Kernel& kernel, double horizon, std::size_t n_terms = 0,
                                                 const MPhiOptions& mphi = {});

nlohmann::json to_json(const PremiumBounds& b);
nlohmann::json to_json(const DeductibleSurplus& d);

}  // namespace hawkes
