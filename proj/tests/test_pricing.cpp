#include <doctest.h>

#include <cmath>

#include "hawkes/oracle.hpp"
#include "hawkes/pricing.hpp"
#include "hawkes/volterra.hpp"
#include "support.hpp"

using namespace hawkes;
using test_support::factorial;
using test_support::poisson_pmf;

namespace {

Contract stoploss(double attachment) {
    Contract c;
    c.h = Payoff::stoploss(attachment);
    c.retention = attachment;
    return c;
}

ExpansionOptions series_options(std::size_t order, std::size_t samples) {
    ExpansionOptions o;
    o.order = order;
    o.samples_per_term = samples;
    return o;
}

BoundOptions quick_bounds(std::size_t samples = 4000) {
    BoundOptions b;
    b.samples = samples;
    return b;
}

const double kOneMinusInvE = 1.0 - std::exp(-1.0);

}  // namespace

TEST_CASE("Poisson premium from the first series term") {
    const HawkesParams p(1.0, Kernel::zero(), 1.0);
    const ClaimModel unit;
    const auto s = premium_expansion(stoploss(2.0), p, unit, series_options(0, 100000), RngStream{1, 0});
    REQUIRE(s.terms.size() == 1);
    CHECK(s.remainder_bound == 0.0);
    CHECK(test_support::within_sigma(s.total, kOneMinusInvE, s.total_stderr));
    const auto split = poisson_surplus(s);
    CHECK(split.surplus_part == 0.0);
    CHECK(split.poisson_part == s.total);
}

TEST_CASE("constant payoff with unit compensation prices the mean count") {
    const HawkesParams p(1.0, Kernel::exponential(1.0, 2.0), 1.0);
    Contract c;
    c.h = Payoff::constant(1.0);
    const auto s = premium_expansion(c, p, ClaimModel{}, series_options(0, 20000), RngStream{2, 0});
    const double target = p.mu * solve_volterra_psi1(p.kernel, 1.0, 1e-3).integral();
    CHECK(std::abs(s.total - target) <= s.remainder_bound + 3.0 * s.total_stderr + 1e-6);
}

TEST_CASE("series premium brackets the Monte Carlo oracle with random marks") {
    const HawkesParams p(1.2, Kernel::exponential(0.8, 2.0), 1.0);
    ClaimModel m;
    m.marks = IndependentExponential{1.0, 0.8};
    m.f = ClaimMap::identity_capped(4.0);
    m.g = ClaimMap::identity_capped(5.0, MarkArg::theta);
    m.kappa = 0.1;
    const Contract c = stoploss(1.5);
    const auto s = premium_expansion(c, p, m, series_options(5, 20000), RngStream{3, 0}, 16);
    const auto o = mc_premium(c, p, m, 200000, 77);
    const double sigma = std::hypot(s.total_stderr, o.std_error);
    CHECK(std::abs(s.total - o.mean) <= s.remainder_bound + 3.0 * sigma);
}

TEST_CASE("poisson/surplus split is a partition of the series") {
    const HawkesParams p(1.0, Kernel::constant(0.5, 1.0), 1.0);
    const auto s = premium_expansion(stoploss(2.0), p, ClaimModel{}, series_options(4, 5000), RngStream{4, 0});
    const auto split = poisson_surplus(s);
    CHECK(split.poisson_part + split.surplus_part == doctest::Approx(s.total).epsilon(1e-14));
    CHECK(split.surplus_part > 0.0);
}

TEST_CASE("simple lower bound") {
    const ClaimModel unit;
    const HawkesParams poisson(1.0, Kernel::zero(), 1.0);
    CHECK(lower_bound_simple(stoploss(1.0), poisson, unit, quick_bounds(), RngStream{1, 0}).mean ==
          doctest::Approx(1.0));

    const HawkesParams c(1.0, Kernel::constant(0.5, 1.0), 1.0);
    double brute = 0.0;
    for (int n = 2; n < 40; ++n) brute += std::pow(0.5, n - 1) / factorial(n);
    CHECK(brute == doctest::Approx(0.2974425).epsilon(1e-6));
    BoundOptions full = quick_bounds();
    full.n_terms = 30;
    const auto lb = lower_bound_simple(stoploss(2.0), c, unit, full, RngStream{1, 0});
    CHECK(lb.mean == doctest::Approx(brute).epsilon(1e-10));

    const auto s = premium_expansion(stoploss(2.0), c, unit, series_options(6, 20000), RngStream{5, 0});
    CHECK(lb.mean <= s.total + 3.0 * s.total_stderr);
}

TEST_CASE("Poisson lower bound is exact without excitation") {
    const HawkesParams p(1.0, Kernel::zero(), 1.0);
    const auto b = premium_bounds(stoploss(2.0), p, ClaimModel{}, quick_bounds(), RngStream{1, 0});
    CHECK(b.lower_poisson.mean == doctest::Approx(kOneMinusInvE).epsilon(1e-12));
    CHECK(b.lower_simple.mean <= b.lower_poisson.mean);
    CHECK(b.n_terms == 1);
}

TEST_CASE("upper bound in the Poisson case") {
    const HawkesParams p(1.0, Kernel::zero(), 1.0);
    BoundOptions o = quick_bounds();
    const auto b = premium_bounds(stoploss(2.0), p, ClaimModel{}, o, RngStream{1, 0});
    REQUIRE(b.c_n.size() == 1);
    CHECK(b.c_n[0] == doctest::Approx(2.0).epsilon(1e-9));
    // e^{-1} h(1) + sum_p min(2/p^2, 1) h(1 + p), plus the tail add-on c_1 / P
    double brute = 0.0;
    for (std::size_t q = 1; q <= o.p_max; ++q) brute += std::min(2.0 / static_cast<double>(q * q), 1.0);
    brute += 2.0 / static_cast<double>(o.p_max);
    CHECK(b.upper.mean == doctest::Approx(brute).epsilon(1e-8));
    // the untruncated series 1 + 1/2 + 2 (pi^2/6 - 5/4)
    const double infinite = 1.5 + 2.0 * (M_PI * M_PI / 6.0 - 1.25);
    CHECK(infinite == doctest::Approx(2.2898681).epsilon(1e-7));
    CHECK(b.upper.mean >= infinite);
    CHECK(b.upper.mean >= kOneMinusInvE);
}

TEST_CASE("upper bound does not increase with p_max") {
    const HawkesParams p(1.0, Kernel::exponential(1.0, 2.0), 1.0);
    ClaimModel m;
    m.marks = IndependentExponential{};
    m.f = ClaimMap::identity_capped(3.0);
    m.g = ClaimMap::identity_capped(3.0);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t P : {5u, 10u, 20u, 50u, 100u, 200u}) {
        BoundOptions o = quick_bounds(2000);
        o.p_max = P;
        o.n_terms = 8;
        const double u = upper_bound(stoploss(1.0), p, m, o, RngStream{9, 0}).mean;
        CHECK(u <= previous * (1.0 + 1e-12));
        previous = u;
    }
}

TEST_CASE("bounds sandwich the oracle") {
    const Kernel kernels[] = {Kernel::zero(), Kernel::constant(0.5, 1.0), Kernel::exponential(1.0, 2.0)};
    ClaimModel m;
    m.marks = IndependentExponential{1.0, 1.0};
    m.f = ClaimMap::identity_capped(4.0);
    m.g = ClaimMap::identity_capped(4.0, MarkArg::theta);
    for (const auto& k : kernels) {
        for (double kappa : {0.0, 0.2}) {
            m.kappa = kappa;
            const HawkesParams p(1.0, k, 1.0);
            const Contract c = stoploss(1.0);
            const auto b = premium_bounds(c, p, m, quick_bounds(4000), RngStream{21, 0});
            const auto o = mc_premium(c, p, m, 100000, 22);
            CAPTURE(k.describe());
            CAPTURE(kappa);
            CHECK(b.lower_simple.mean <= b.lower_poisson.mean + 1e-12);
            CHECK(b.lower_poisson.mean - 3.0 * std::hypot(o.std_error, b.lower_poisson.std_error) <= o.mean);
            CHECK(b.upper.mean + 3.0 * std::hypot(o.std_error, b.upper.std_error) >= o.mean);
        }
    }
}

TEST_CASE("bounds reject unbounded payoffs") {
    Contract c;
    c.h = Payoff::identity();
    const HawkesParams p(1.0, Kernel::zero(), 1.0);
    CHECK_THROWS_AS(premium_bounds(c, p, ClaimModel{}, quick_bounds(), RngStream{1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(premium_expansion(c, p, ClaimModel{}, series_options(1, 10), RngStream{1, 0}),
                    std::invalid_argument);
}

TEST_CASE("deductible surplus bound") {
    CHECK(deductible_surplus_lower_bound(1.0, 1.0, 1.5, 1.0, Kernel::zero(), 1.0).value == 0.0);

    // floor(K / f) = 1: trigger at two events in total
    const Kernel c = Kernel::constant(0.5, 1.0);
    const auto d = deductible_surplus_lower_bound(1.0, 1.0, 1.5, 1.0, c, 1.0);
    CHECK(d.trigger_count == 2);
    double brute = 0.0;
    for (int n = 2; n < 40; ++n) {
        double tail = 0.0;
        for (int q = std::max(0, 2 - n); q < 60; ++q) tail += poisson_pmf(1.0, q);
        brute += std::pow(0.5, n - 1) / factorial(n) * tail;
    }
    CHECK(d.value == doctest::Approx(brute).epsilon(1e-10));
    CHECK(d.value == doctest::Approx(0.2974425).epsilon(1e-6));
    // constant kernel: Phi(T) = c, so the closed form coincides
    CHECK(d.has_closed_form);
    CHECK(d.closed_form == doctest::Approx(d.value).epsilon(1e-10));

    BoundOptions full = quick_bounds();
    full.n_terms = 30;
    const auto b = premium_bounds(stoploss(1.5), HawkesParams(1.0, c, 1.0), ClaimModel{}, full, RngStream{1, 0});
    // n = 1 part of the Poisson lower bound: mu sum_p pmf(p) h(1 + p)
    const double first = 1.0 - poisson_pmf(1.0, 0);
    CHECK(d.value <= b.lower_poisson.mean - first + 1e-12);

    CHECK_THROWS_AS(deductible_surplus_lower_bound(1.0, 1.0, 1.0, 0.0, c, 1.0), std::domain_error);
}

TEST_CASE("surplus part dominates the deductible bound") {
    const HawkesParams p(1.0, Kernel::constant(0.5, 1.0), 1.0);
    const Contract contract = stoploss(3.0);
    const auto s = premium_expansion(contract, p, ClaimModel{}, series_options(6, 50000), RngStream{8, 0});
    const auto split = poisson_surplus(s);
    const auto d = deductible_surplus_lower_bound(1.0, 1.0, 3.0, 1.0, p.kernel, 1.0, 6);
    CHECK(d.value <= split.surplus_part + 3.0 * split.surplus_stderr);
}

TEST_CASE("bound reports") {
    const HawkesParams p(1.0, Kernel::exponential(1.0, 2.0), 1.0);
    const auto b = premium_bounds(stoploss(2.0), p, ClaimModel{}, quick_bounds(), RngStream{1, 0});
    const auto j = to_json(b);
    CHECK(j.at("n_terms") == b.n_terms);
    CHECK(j.at("mphi").size() == b.n_terms);
    CHECK(j.at("upper").at("value").get<double>() == b.upper.mean);
    CHECK(b.series_tail_proxy < 1e-3 * b.upper.mean);

    BoundOptions small = quick_bounds();
    small.p_max = 3;
    const auto t = premium_bounds(stoploss(2.0), p, ClaimModel{}, small, RngStream{1, 0});
    double head = 0.0;
    for (int q = 0; q <= 3; ++q) head += poisson_pmf(1.0, q);
    CHECK(t.poisson_tail_mass == doctest::Approx(1.0 - head).epsilon(1e-12));
}
