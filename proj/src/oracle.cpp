#include "hawkes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/parallel.hpp"

namespace hawkes {

OracleEstimate mc_premium(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                          std::size_t n_paths, std::uint64_t seed) {
    if (n_paths == 0) throw std::invalid_argument("mc_premium: n_paths must be >= 1");
    model.validate();
    const Stat st = parallel::reduce_stat(n_paths, [&](std::size_t i) {
        const TerminalLoss tl = simulate_terminal_loss(params, model, RngStream{seed, i});
        const double hv = contract.h(tl.L);
        return hv == 0.0 ? 0.0 : hv * tl.K;
    });
    return {st.mean(), st.stderr_of_mean(), n_paths, seed};
}

std::vector<TailPoint> mc_tail(const HawkesParams& params, const ClaimModel& model,
                               const std::vector<double>& thresholds, std::size_t n_paths, std::uint64_t seed) {
    if (n_paths == 0) throw std::invalid_argument("mc_tail: n_paths must be >= 1");
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw std::invalid_argument("mc_tail: thresholds must be sorted");
    const std::size_t k = thresholds.size();
    const auto st = parallel::reduce_stats(n_paths, k, [&](std::size_t i, double* out) {
        const double L = simulate_terminal_loss(params, model, RngStream{seed, i}).L;
        for (std::size_t j = 0; j < k; ++j) out[j] = L >= thresholds[j] ? 1.0 : 0.0;
    });
    std::vector<TailPoint> out;
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double p = st[j].mean();
        out.push_back({thresholds[j], p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_paths))});
    }
    return out;
}

nlohmann::json to_json(const OracleEstimate& e) {
    return {{"mean", e.mean}, {"stderr", e.std_error}, {"n_paths", e.n_paths}, {"seed", e.seed}};
}

}  // namespace hawkes
