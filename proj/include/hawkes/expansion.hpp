#pragma once

// Simplex integrals m_Phi(Delta^n), flat Dirichlet sampling and the truncated
// expansion series E[F int Z dH] = sum_n mu int_{Delta^n} prod Phi E[Z F]^{shifted}.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawkes/event_path.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

/// Point of the ordered simplex T > u_1 > ... > u_n > 0.
struct SimplexPoint {
    std::vector<double> times;  // descending
    [[nodiscard]] std::size_t order() const noexcept { return times.size(); }
};

SimplexPoint sample_simplex(std::size_t n, double horizon, Engine& eng);
SimplexPoint sample_simplex(std::size_t n, double horizon, const RngStream& rng);

/// prod_{i=2}^n Phi(u_{i-1} - u_i) for a descending tuple.
[[nodiscard]] double kernel_chain(const Kernel& kernel, const std::vector<double>& desc);

enum class MPhiMethod { automatic, quadrature, monte_carlo, closed_form };
[[nodiscard]] std::string method_name(MPhiMethod m);

struct MPhiOptions {
    MPhiMethod method = MPhiMethod::automatic;
    std::size_t mc_samples = 200000;
    RngStream stream{0x6D706869, 0};
};

struct MPhiResult {
    double value = 0.0;
    double std_error = 0.0;
    MPhiMethod method = MPhiMethod::closed_form;
};

/// Closed form exists for constant kernels whose support covers [0, T] and for
/// exponential kernels.
[[nodiscard]] bool has_closed_form_mphi(const Kernel& kernel, double horizon) noexcept;

/// m_Phi(Delta^1) = 1; for n >= 2 the simplex integral of the kernel chain.
/// Automatic: closed form when available, nested Gauss-Legendre for n <= 4,
/// flat-Dirichlet Monte Carlo otherwise.
MPhiResult m_phi(const Kernel& kernel, double horizon, std::size_t n, const MPhiOptions& opt = {});

/// (Phi*)^{n-1} T^n / n!
[[nodiscard]] double m_phi_upper_bound(const Kernel& kernel, double horizon, std::size_t n);

/// T^n / n!
[[nodiscard]] double simplex_volume(double horizon, std::size_t n);

/// One shifted-path evaluation handed to a payoff functional.
struct ShiftedSample {
    const EventPath& path;
    /// Enforced times, descending u_1 > ... > u_n.
    const std::vector<double>& shifts;
    /// Randomness owned by the functional. Depends only on the sample index, so
    /// it is shared across expansion orders.
    RngStream stream;
    std::size_t order;
    std::size_t sample_index;
};

struct ZF {
    double z;
    double f;
};

/// Bounded predictable weight Z (at v_1) and bounded functional F, evaluated together.
struct PathFunctionalSpec {
    std::function<ZF(const ShiftedSample&)> evaluate;
    double z_sup = 1.0;
    double f_sup = 1.0;
};

struct SeriesTerm {
    std::size_t n;
    double value;
    double std_error;
};

struct SeriesEstimate {
    std::vector<SeriesTerm> terms;
    std::size_t truncation_order = 0;
    double remainder_bound = 0.0;
    double total = 0.0;
    /// Sum of per-term standard errors (a bound on the total's standard error,
    /// since terms sharing functional streams are not independent).
    double total_stderr = 0.0;
};

struct ExpansionOptions {
    /// 0 selects the order automatically: smallest M with remainder_bound < rel_target * |partial sum|.
    std::size_t order = 0;
    std::size_t max_order = 40;
    double rel_target = 1e-4;
    std::size_t samples_per_term = 10000;
};

/// Thrown when a functional returns a value above its declared sup.
struct BoundViolation : std::logic_error {
    using std::logic_error::logic_error;
};

SeriesEstimate expansion_estimate(const PathFunctionalSpec& spec, const HawkesParams& params,
                                  const ExpansionOptions& opt, const RngStream& rng);

/// Z_sup F_sup mu (1 + |Phi|_1 / (1 - |Phi|_1)) (Phi*)^M T^{M+1} / (M+1)!
[[nodiscard]] double remainder_bound(double z_sup, double f_sup, const HawkesParams& params, std::size_t M);

nlohmann::json to_json(const SeriesEstimate& s);

}  // namespace hawkes
