#pragma once

// Claim marks, severity/compensation maps, loss processes and stop-loss payoffs.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hawkes/event_path.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

/// One claim: severity mark eta and compensation mark theta.
struct Mark {
    double eta = 0.0;
    double theta = 0.0;
    friend bool operator==(const Mark&, const Mark&) = default;
};

struct IndependentExponential {
    double rate_eta = 1.0;
    double rate_theta = 1.0;
};

/// (log eta, log theta) bivariate normal.
struct LognormalPair {
    double mu_eta = 0.0;
    double sigma_eta = 1.0;
    double mu_theta = 0.0;
    double sigma_theta = 1.0;
    double rho = 0.0;
};

struct DeterministicMarks {
    double eta = 1.0;
    double theta = 1.0;
};

using MarkDistribution = std::variant<IndependentExponential, LognormalPair, DeterministicMarks>;

enum class MarkArg { eta, theta };

/// Bounded non-negative map of one mark coordinate.
struct ClaimMap {
    enum class Kind { identity_capped, indicator_above, affine_capped, constant };
    Kind kind = Kind::constant;
    MarkArg arg = MarkArg::eta;
    /// identity_capped: min(x, cap). indicator_above: unit * 1{x >= threshold}.
    /// affine_capped: min(max(a + b x, 0), cap). constant: value.
    double cap = std::numeric_limits<double>::infinity();
    double threshold = 0.0;
    double unit = 1.0;
    double a = 0.0;
    double b = 1.0;
    double value = 1.0;

    static ClaimMap constant(double v);
    static ClaimMap identity_capped(double cap, MarkArg arg = MarkArg::eta);
    static ClaimMap indicator_above(double threshold, double unit = 1.0, MarkArg arg = MarkArg::eta);
    static ClaimMap affine_capped(double a, double b, double cap, MarkArg arg = MarkArg::eta);

    [[nodiscard]] double operator()(const Mark& m) const noexcept;
    [[nodiscard]] double sup() const noexcept;
    /// Throws std::invalid_argument if the map is negative or unbounded.
    void validate(const std::string& name) const;
};

struct ClaimModel {
    MarkDistribution marks = DeterministicMarks{};
    ClaimMap f = ClaimMap::constant(1.0);
    ClaimMap g = ClaimMap::constant(1.0);
    double kappa = 0.0;

    void validate() const;
    [[nodiscard]] bool deterministic() const noexcept {
        return std::holds_alternative<DeterministicMarks>(marks);
    }
    Mark draw(Engine& eng) const;
    /// Discount factor e^{-kappa (T - t)}.
    [[nodiscard]] double discount(double horizon, double t) const noexcept;
};

/// Marks indexed by event ordinal and drawn lazily in order from one stream, so
/// every path reading the same stream sees the same mark sequence.
class ClaimSequence {
public:
    ClaimSequence(const ClaimModel& model, const RngStream& stream) : model_(&model), eng_(stream) {}
    const Mark& operator[](std::size_t ordinal);

private:
    const ClaimModel* model_;
    Engine eng_;
    std::vector<Mark> marks_;
};

/// First `count` marks of the claims sequence of `rng`. Marks attached to enforced
/// jumps come from rng.child(bar_claims) instead.
std::vector<Mark> sample_claims(const ClaimModel& model, std::size_t count, const RngStream& rng);

/// L_T = sum_i e^{-kappa (T - tau_i)} f(eta_i).
double loss_value(const EventPath& path, const std::vector<Mark>& claims, const ClaimModel& model, double horizon);
/// K_T = sum_i e^{-kappa (T - tau_i)} g(eta_i, theta_i).
double generalized_loss_value(const EventPath& path, const std::vector<Mark>& claims, const ClaimModel& model,
                              double horizon);

/// Payoff function h of the contract.
struct Payoff {
    enum class Kind { stoploss, identity, cdf_band, constant };
    Kind kind = Kind::stoploss;
    double lower = 0.0;  // attachment
    double upper = std::numeric_limits<double>::infinity();
    double value = 1.0;

    static Payoff stoploss(double attachment);
    static Payoff identity();
    static Payoff cdf_band(double lower, double upper);
    static Payoff constant(double v);

    [[nodiscard]] double operator()(double x) const noexcept;
    [[nodiscard]] bool bounded() const noexcept { return kind != Kind::identity; }
    /// Every supported family is non-decreasing; bound routines still check.
    [[nodiscard]] bool non_decreasing() const noexcept { return true; }
    [[nodiscard]] double sup() const noexcept;
    [[nodiscard]] std::string name() const;
};

struct Contract {
    Payoff h = Payoff::stoploss(1.0);
    /// Retention and cap of the generalized stop-loss payoff (decomposition only).
    double retention = 0.0;
    double cap = std::numeric_limits<double>::infinity();

    void validate() const;
    [[nodiscard]] bool has_band() const noexcept { return std::isfinite(cap); }
};

/// 0 if L < K_lo; K - K_lo if K_lo <= L <= K_hi; K_hi - K_lo if L > K_hi.
double stoploss_payoff(double K, double L, double lo, double hi);

/// Terminal losses of one standard path with its own claims.
struct TerminalLoss {
    double L = 0.0;
    double K = 0.0;
    std::size_t count = 0;
};

/// Path from simulate_standard(params, stream); claims from stream.child(claims).
TerminalLoss simulate_terminal_loss(const HawkesParams& params, const ClaimModel& model, const RngStream& stream);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

struct PremiumDecomposition {
    Estimate term1;   // E[K 1{L > lo}]
    Estimate term2;   // lo P[lo <= L <= hi]
    Estimate term3;   // (hi - lo) P[L >= hi]
    Estimate total;   // term1 - term2 + term3
    Estimate band_total;  // first term restricted to lo < L <= hi
    Estimate direct;  // E[stoploss_payoff]
    double delta = 0.0;       // |total - direct|
    double band_delta = 0.0;  // |band_total - direct|
    std::size_t n_paths = 0;
};

PremiumDecomposition premium_decomposition_mc(const Contract& contract, const HawkesParams& params,
                                              const ClaimModel& model, std::size_t n_paths, std::uint64_t seed);

nlohmann::json to_json(const PremiumDecomposition& d);

}  // namespace hawkes
