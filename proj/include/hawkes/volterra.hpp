#pragma once

// Linear Volterra equations of the second kind on a uniform grid, solved by
// trapezoidal product integration:
//   Psi1(t) = 1 + int_0^t Phi(t-s) Psi1(s) ds
//   Psi2(t) = Psi1(t)^2 + int_0^t Phi(s) Psi2(t-s) ds

#include <cstddef>
#include <vector>

#include "hawkes/kernel.hpp"

namespace hawkes {

struct VolterraGrid {
    double step = 0.0;
    std::vector<double> values;  // values[i] at t = i * step
    [[nodiscard]] double back() const { return values.back(); }
    /// Trapezoid rule over the grid.
    [[nodiscard]] double integral() const;
};

/// round(T / step) intervals; throws unless step > 0. The solvers also need step * Phi(0) < 2.
[[nodiscard]] std::size_t volterra_intervals(double horizon, double step);
[[nodiscard]] inline double default_volterra_step(double horizon) { return horizon / 2000.0; }

VolterraGrid solve_volterra_psi1(const Kernel& kernel, double horizon, double step);
VolterraGrid solve_volterra_psi2(const Kernel& kernel, const VolterraGrid& psi1, double horizon, double step);

struct MomentConstants {
    double C1 = 0.0;  // int_0^T Psi2
    double C2 = 0.0;  // (int_0^T Psi1)^2
    double second_moment = 0.0;  // mu_eff C1 + mu_eff^2 C2
    double first_moment = 0.0;   // mu_eff int_0^T Psi1
};

MomentConstants moment_constants(const Kernel& kernel, double horizon, double step, double mu_eff);

}  // namespace hawkes
