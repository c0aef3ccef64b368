#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hawkes/parallel.hpp"
#include "hawkes/shifted.hpp"
#include "hawkes/simulate.hpp"

using namespace hawkes;

TEST_CASE("single shift on a Poisson process adds exactly one jump") {
    const HawkesParams p(1.0, Kernel::zero(), 1.0);
    const ShiftSpec s({0.5});
    for (std::uint64_t i = 0; i < 500; ++i) {
        const RngStream r{2, i};
        const EventPath shifted = simulate_shifted(p, s, r);
        EventPath expected = simulate_standard(p, r);
        expected.events.push_back({0.5, EventTag::enforced, p.mu});
        std::sort(expected.events.begin(), expected.events.end(),
                  [](const Event& a, const Event& b) { return a.time < b.time; });
        REQUIRE(shifted.size() == expected.size());
        for (std::size_t j = 0; j < shifted.size(); ++j) {
            CHECK(shifted.events[j].time == expected.events[j].time);
            CHECK((shifted.events[j].tag == EventTag::enforced) == (shifted.events[j].time == 0.5));
        }
    }
    const std::size_t n = 100000;
    const Stat st = parallel::reduce_stat(
        n, [&](std::size_t i) { return static_cast<double>(simulate_shifted(p, s, RngStream{3, i}).size()); });
    // Poisson(1) plus one deterministic jump: mean 2, variance 1
    CHECK(std::abs(st.mean() - 2.0) <= 3.0 * std::sqrt(1.0 / n));
}

TEST_CASE("shifted count sandwich under a shared embedding") {
    const Kernel kernels[] = {Kernel::exponential(1.0, 2.0), Kernel::constant(0.5, 1.0), Kernel::constant(0.4, 0.3)};
    for (const auto& k : kernels) {
        const HawkesParams p(1.0, k, 1.0);
        const HawkesParams dom2 = dominating_params(p, 2);
        std::size_t lower = 0;
        std::size_t standard = 0;
        std::size_t upper = 0;
        for (std::uint64_t i = 0; i < 3000; ++i) {
            PoissonEmbedding emb(RngStream{31, i}, p.horizon);
            const ShiftSpec s({0.2 + 0.1 * static_cast<double>(i % 3), 0.75});
            const auto shifted = simulate_shifted(p, s, emb).size();
            const auto base = simulate_poisson_base(p.mu, emb).size();
            const auto h = simulate_standard(p, emb).size();
            const auto d = simulate_standard(dom2, emb).size();
            if (shifted < 2 + base) ++lower;
            if (shifted < 2 + h) ++standard;
            if (shifted > 2 + d) ++upper;
        }
        CHECK(lower == 0);
        CHECK(standard == 0);
        CHECK(upper == 0);
    }
}

TEST_CASE("enforced jumps record the left-limit intensity") {
    const HawkesParams p(1.0, Kernel::exponential(1.0, 2.0), 1.0);
    const EventPath path = simulate_shifted(p, ShiftSpec({0.3, 0.6}), RngStream{4, 4});
    std::size_t enforced = 0;
    for (const auto& e : path.events) {
        CHECK(e.intensity == doctest::Approx(intensity_at(p, path, e.time)).epsilon(1e-12));
        if (e.tag == EventTag::enforced) ++enforced;
    }
    CHECK(enforced == 2);
    CHECK(path.count(EventTag::enforced) == 2);
}

TEST_CASE("shift composition identity") {
    const HawkesParams p(1.2, Kernel::exponential(1.0, 2.0), 1.0);
    Engine eng(77);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        double a = eng.uniform();
        double b = eng.uniform();
        if (a > b) std::swap(a, b);
        const RngStream r{55, i};
        PoissonEmbedding e1(r, p.horizon);
        PoissonEmbedding e2(r, p.horizon);
        const EventPath direct = simulate_shifted(p, ShiftSpec({a, b}), e1);
        const EventPath once = simulate_shifted(p, ShiftSpec({a}), e2);
        const EventPath composed = reshift(p, once, b, e2);
        REQUIRE(direct.size() == composed.size());
        for (std::size_t j = 0; j < direct.size(); ++j) {
            CHECK(direct.events[j].time == composed.events[j].time);
            CHECK(direct.events[j].tag == composed.events[j].tag);
        }
        // reshift keeps the prefix before the new jump
        CHECK(composed.prefix_before(b) == once.prefix_before(b));
    }
}

TEST_CASE("empty shift set is the standard path") {
    const HawkesParams p(1.0, Kernel::exponential(1.0, 2.0), 1.0);
    for (std::uint64_t i = 0; i < 50; ++i)
        CHECK(simulate_shifted(p, ShiftSpec{}, RngStream{6, i}) == simulate_standard(p, RngStream{6, i}));
}

TEST_CASE("dominating parameters") {
    CHECK(dominating_params(HawkesParams(1.0, Kernel::zero(), 1.0), 5).mu == doctest::Approx(1.0));
    CHECK(dominating_params(HawkesParams(1.0, Kernel::exponential(2.0, 4.0), 1.0), 3).mu == doctest::Approx(7.0));
    CHECK(dominating_params(HawkesParams(0.5, Kernel::constant(0.3, 1.0), 1.0), 2).mu == doctest::Approx(1.1));
    const Kernel bump(TableKernel{{{0.0, 0.1}, {0.5, 0.6}, {1.0, 0.0}}}, false);
    CHECK(dominating_params(HawkesParams(1.0, bump, 1.0), 2).mu == doctest::Approx(2.2));
}

TEST_CASE("shift specs are validated") {
    CHECK_NOTHROW(ShiftSpec({0.1, 0.2}).validate(1.0));
    CHECK_THROWS_AS(ShiftSpec({0.2, 0.1}).validate(1.0), std::domain_error);
    CHECK_THROWS_AS(ShiftSpec({0.0}).validate(1.0), std::domain_error);
    CHECK_THROWS_AS(ShiftSpec({1.0}).validate(1.0), std::domain_error);
    CHECK_THROWS_AS(ShiftSpec({0.3, 0.3}).validate(1.0), std::domain_error);
    CHECK(ShiftSpec::from_descending({0.9, 0.4, 0.1}).times == std::vector<double>{0.1, 0.4, 0.9});
}
