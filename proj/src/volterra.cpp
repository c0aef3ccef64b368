#include "hawkes/volterra.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "hawkes/simd.hpp"

namespace hawkes {

namespace {

// Psi_i = (F_i + h (Phi_i Psi_0 / 2 + sum_{j=1}^{i-1} Phi_{i-j} Psi_j)) / (1 - h Phi_0 / 2)
VolterraGrid solve(const Kernel& kernel, double horizon, double step, const std::vector<double>& forcing) {
    const std::size_t n = volterra_intervals(horizon, step);
    const double h = horizon / static_cast<double>(n);
    std::vector<double> phi(n + 1);
    for (std::size_t i = 0; i <= n; ++i) phi[i] = kernel.eval_unchecked(static_cast<double>(i) * h);
    const double denom = 1.0 - 0.5 * h * phi[0];

    VolterraGrid out;
    out.step = h;
    out.values.assign(n + 1, 0.0);
    auto& psi = out.values;
    psi[0] = forcing[0];
    for (std::size_t i = 1; i <= n; ++i) {
        double conv = 0.5 * phi[i] * psi[0];
        if (i > 1)
            conv += simd::dot_reversed(std::span<const double>(phi.data() + 1, i - 1),
                                       std::span<const double>(psi.data() + 1, i - 1));
        psi[i] = (forcing[i] + h * conv) / denom;
    }
    return out;
}

}  // namespace

double VolterraGrid::integral() const {
    if (values.size() < 2) return 0.0;
    const double inner = simd::sum(std::span<const double>(values.data() + 1, values.size() - 2));
    return step * (0.5 * (values.front() + values.back()) + inner);
}

std::size_t volterra_intervals(double horizon, double step) {
    if (!(horizon > 0.0)) throw std::invalid_argument("volterra: horizon must be > 0");
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("volterra: step must be > 0");
    const double r = std::round(horizon / step);
    if (r < 1.0 || r > 1e7) throw std::invalid_argument("volterra: step gives an unusable grid");
    return static_cast<std::size_t>(r);
}

VolterraGrid solve_volterra_psi1(const Kernel& kernel, double horizon, double step) {
    const std::size_t n = volterra_intervals(horizon, step);
    if (!(0.5 * (horizon / static_cast<double>(n)) * kernel.at_zero() < 1.0))
        throw std::invalid_argument("volterra: step too large for the kernel (h Phi(0) / 2 must be < 1)");
    return solve(kernel, horizon, step, std::vector<double>(n + 1, 1.0));
}

VolterraGrid solve_volterra_psi2(const Kernel& kernel, const VolterraGrid& psi1, double horizon, double step) {
    const std::size_t n = volterra_intervals(horizon, step);
    if (psi1.values.size() != n + 1) throw std::invalid_argument("volterra: psi1 lives on a different grid");
    if (!(0.5 * (horizon / static_cast<double>(n)) * kernel.at_zero() < 1.0))
        throw std::invalid_argument("volterra: step too large for the kernel (h Phi(0) / 2 must be < 1)");
    std::vector<double> forcing(n + 1);
    for (std::size_t i = 0; i <= n; ++i) forcing[i] = psi1.values[i] * psi1.values[i];
    // The convolution int_0^t Phi(s) Psi2(t-s) ds equals int_0^t Phi(t-s) Psi2(s) ds.
    return solve(kernel, horizon, step, forcing);
}

MomentConstants moment_constants(const Kernel& kernel, double horizon, double step, double mu_eff) {
    const auto psi1 = solve_volterra_psi1(kernel, horizon, step);
    const auto psi2 = solve_volterra_psi2(kernel, psi1, horizon, step);
    MomentConstants c;
    const double i1 = psi1.integral();
    c.C1 = psi2.integral();
    c.C2 = i1 * i1;
    c.second_moment = mu_eff * c.C1 + mu_eff * mu_eff * c.C2;
    c.first_moment = mu_eff * i1;
    return c;
}

}  // namespace hawkes
