#include <doctest.h>

#include <cmath>

#include "hawkes/parallel.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/volterra.hpp"
#include "support.hpp"

using namespace hawkes;

namespace {

double max_error(const VolterraGrid& g, auto exact) {
    double err = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i)
        err = std::max(err, std::abs(g.values[i] - exact(static_cast<double>(i) * g.step)));
    return err;
}

// trapezoid errors are O(h^2): (4 f(h/2) - f(h)) / 3
double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace

TEST_CASE("zero kernel: Psi1 and Psi2 are identically one") {
    const Kernel z = Kernel::zero();
    const auto p1 = solve_volterra_psi1(z, 2.0, 0.01);
    const auto p2 = solve_volterra_psi2(z, p1, 2.0, 0.01);
    for (double v : p1.values) CHECK(v == 1.0);
    for (double v : p2.values) CHECK(v == 1.0);
    CHECK(p1.integral() == doctest::Approx(2.0));
}

TEST_CASE("constant kernel: Psi1 = e^{ct}") {
    const Kernel c = Kernel::constant(0.5, 1.0);
    const auto p1 = solve_volterra_psi1(c, 1.0, 1e-3);
    CHECK(p1.values.size() == 1001);
    CHECK(p1.back() == doctest::Approx(1.6487213).epsilon(1e-7));
    CHECK(max_error(p1, [](double t) { return std::exp(0.5 * t); }) <= 1e-6);
}

TEST_CASE("constant kernel: Psi2 = 2 e^{2ct} - e^{ct}") {
    const Kernel c = Kernel::constant(0.5, 1.0);
    const auto p1 = solve_volterra_psi1(c, 1.0, 1e-3);
    const auto p2 = solve_volterra_psi2(c, p1, 1.0, 1e-3);
    CHECK(p2.values.front() == 1.0);
    CHECK(max_error(p2, [](double t) { return 2.0 * std::exp(t) - std::exp(0.5 * t); }) <= 1e-6);

    // self-convergence: halving the step moves the endpoint by less than 1e-6
    const auto c1 = solve_volterra_psi1(c, 1.0, 2e-3);
    const auto c2 = solve_volterra_psi2(c, c1, 1.0, 2e-3);
    const double extrapolated = richardson(c2.back(), p2.back());
    CHECK(std::abs(p2.back() - extrapolated) <= 1e-6);
}

TEST_CASE("exponential kernel: Psi1 against Richardson extrapolation and the resolvent") {
    const Kernel e = Kernel::exponential(1.0, 2.0);
    const auto coarse = solve_volterra_psi1(e, 1.0, 1e-3);
    const auto fine = solve_volterra_psi1(e, 1.0, 5e-4);
    const double extrapolated = richardson(coarse.back(), fine.back());
    CHECK(std::abs(coarse.back() - extrapolated) <= 1e-6);
    // resolvent of alpha e^{-beta t} is alpha e^{-(beta - alpha) t}
    const double exact = 1.0 + 1.0 / (2.0 - 1.0) * (1.0 - std::exp(-1.0));
    CHECK(extrapolated == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("moment constants: Poisson case") {
    const auto m = moment_constants(Kernel::zero(), 1.0, 1e-3, 1.0);
    CHECK(m.C1 == doctest::Approx(1.0));
    CHECK(m.C2 == doctest::Approx(1.0));
    CHECK(m.second_moment == doctest::Approx(2.0));
    CHECK(m.first_moment == doctest::Approx(1.0));
    CHECK(moment_constants(Kernel::zero(), 2.0, 1e-3, 3.0).second_moment == doctest::Approx(42.0));
}

TEST_CASE("second moment matches simulation for a constant kernel") {
    const HawkesParams p(1.0, Kernel::constant(0.5, 1.0), 1.0);
    const auto m = moment_constants(p.kernel, 1.0, 1e-3, p.mu);
    const Stat sq = parallel::reduce_stat(1000000, [&](std::size_t i) {
        const double h = static_cast<double>(simulate_standard(p, RngStream{61, i}).size());
        return h * h;
    });
    CHECK(test_support::within_sigma(sq.mean(), m.second_moment, sq.stderr_of_mean()));
    // closed form of mu int Psi1 for Psi1 = e^{ct}
    CHECK(m.first_moment == doctest::Approx(2.0 * (std::exp(0.5) - 1.0)).epsilon(1e-6));
}

TEST_CASE("grid validation") {
    CHECK(volterra_intervals(1.0, 1e-3) == 1000);
    CHECK_THROWS_AS((void)volterra_intervals(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)volterra_intervals(1.0, 3.0), std::invalid_argument);
    const auto p1 = solve_volterra_psi1(Kernel::zero(), 1.0, 0.01);
    CHECK_THROWS_AS(solve_volterra_psi2(Kernel::zero(), p1, 1.0, 0.02), std::invalid_argument);
    CHECK(default_volterra_step(4.0) == doctest::Approx(0.002));
}
