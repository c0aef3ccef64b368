#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hawkes {

/// Phi(t) = alpha * exp(-beta * t).
struct ExponentialKernel {
    double alpha = 0.0;
    double beta = 1.0;
};

/// Phi(t) = c on [0, support], 0 beyond.
struct ConstantKernel {
    double c = 0.0;
    double support = 1.0;
};

/// Piecewise-linear interpolation through (time, rate) knots starting at t = 0;
/// zero beyond the last knot.
struct TableKernel {
    std::vector<std::pair<double, double>> knots;
};

/// Excitation kernel. Immutable after construction; the stability condition
/// ||Phi||_1 < 1 is enforced strictly.
class Kernel {
public:
    using Family = std::variant<ExponentialKernel, ConstantKernel, TableKernel>;

    explicit Kernel(ExponentialKernel k);
    explicit Kernel(ConstantKernel k);
    /// A table kernel has no analytic monotonicity; the caller declares it.
    Kernel(TableKernel k, bool declared_non_increasing);

    static Kernel zero() { return Kernel(ConstantKernel{0.0, 1.0}); }
    static Kernel exponential(double alpha, double beta) { return Kernel(ExponentialKernel{alpha, beta}); }
    static Kernel constant(double c, double support) { return Kernel(ConstantKernel{c, support}); }

    /// Phi(t); throws std::domain_error for t < 0.
    [[nodiscard]] double eval(double t) const;
    [[nodiscard]] double operator()(double t) const { return eval(t); }
    /// Phi(t) without the domain check; t must be >= 0.
    [[nodiscard]] double eval_unchecked(double t) const noexcept;

    [[nodiscard]] double l1_norm() const noexcept { return l1_; }
    [[nodiscard]] double sup_value() const noexcept { return sup_; }
    [[nodiscard]] double at_zero() const noexcept { return eval_unchecked(0.0); }
    [[nodiscard]] bool non_increasing() const noexcept { return non_increasing_; }
    [[nodiscard]] bool is_zero() const noexcept { return sup_ == 0.0; }

    /// Points where Phi may be discontinuous or non-smooth (used to split quadrature).
    [[nodiscard]] std::vector<double> breakpoints() const;

    [[nodiscard]] const Family& family() const noexcept { return family_; }
    [[nodiscard]] std::string describe() const;

private:
    void finalize();

    Family family_;
    double l1_ = 0.0;
    double sup_ = 0.0;
    bool non_increasing_ = true;
};

/// Baseline intensity, kernel and horizon. mu > 0 and horizon > 0; a declared
/// non-increasing kernel is verified on a grid of step horizon / 1e4.
struct HawkesParams {
    double mu;
    Kernel kernel;
    double horizon;

    HawkesParams(double mu, Kernel kernel, double horizon);
};

/// Upper bound on E[Lambda_t]: mu * (1 + ||Phi||_1 / (1 - ||Phi||_1)).
[[nodiscard]] double mean_intensity_bound(const HawkesParams& params) noexcept;

/// Scans [0, horizon] with `steps` intervals; true if no increase is observed.
[[nodiscard]] bool scan_non_increasing(const Kernel& kernel, double horizon, int steps = 10000);

}  // namespace hawkes
