#include "hawkes/claims.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hawkes/parallel.hpp"
#include "hawkes/simulate.hpp"

namespace hawkes {

namespace {

struct MarkSampler {
    Engine& eng;
    Mark operator()(const IndependentExponential& d) const {
        const double e = eng.exponential(d.rate_eta);
        return {e, eng.exponential(d.rate_theta)};
    }
    Mark operator()(const LognormalPair& d) const {
        const double r = std::sqrt(-2.0 * std::log(eng.uniform()));
        const double a = 2.0 * std::numbers::pi * eng.uniform();
        const double z1 = r * std::cos(a);
        const double z2 = r * std::sin(a);
        const double w = d.rho * z1 + std::sqrt(1.0 - d.rho * d.rho) * z2;
        return {std::exp(d.mu_eta + d.sigma_eta * z1), std::exp(d.mu_theta + d.sigma_theta * w)};
    }
    Mark operator()(const DeterministicMarks& d) const { return {d.eta, d.theta}; }
};

double sum_losses(const EventPath& path, const std::vector<Mark>& claims, const ClaimModel& model, double horizon,
                  const ClaimMap& map) {
    if (claims.size() < path.size()) throw std::invalid_argument("fewer claims than events on the path");
    double acc = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
        acc += model.discount(horizon, path.events[i].time) * map(claims[i]);
    return acc;
}

}  // namespace

ClaimMap ClaimMap::constant(double v) {
    ClaimMap m;
    m.kind = Kind::constant;
    m.value = v;
    return m;
}

ClaimMap ClaimMap::identity_capped(double cap, MarkArg arg) {
    ClaimMap m;
    m.kind = Kind::identity_capped;
    m.cap = cap;
    m.arg = arg;
    return m;
}

ClaimMap ClaimMap::indicator_above(double threshold, double unit, MarkArg arg) {
    ClaimMap m;
    m.kind = Kind::indicator_above;
    m.threshold = threshold;
    m.unit = unit;
    m.arg = arg;
    return m;
}

ClaimMap ClaimMap::affine_capped(double a, double b, double cap, MarkArg arg) {
    ClaimMap m;
    m.kind = Kind::affine_capped;
    m.a = a;
    m.b = b;
    m.cap = cap;
    m.arg = arg;
    return m;
}

double ClaimMap::operator()(const Mark& mk) const noexcept {
    const double x = arg == MarkArg::eta ? mk.eta : mk.theta;
    switch (kind) {
        case Kind::identity_capped: return std::min(std::max(x, 0.0), cap);
        case Kind::indicator_above: return x >= threshold ? unit : 0.0;
        case Kind::affine_capped: return std::min(std::max(a + b * x, 0.0), cap);
        case Kind::constant: return value;
    }
    return 0.0;
}

double ClaimMap::sup() const noexcept {
    switch (kind) {
        case Kind::identity_capped:
        case Kind::affine_capped: return cap;
        case Kind::indicator_above: return unit;
        case Kind::constant: return value;
    }
    return 0.0;
}

void ClaimMap::validate(const std::string& name) const {
    auto fail = [&](const char* what) { throw std::invalid_argument(name + ": " + what); };
    switch (kind) {
        case Kind::identity_capped:
        case Kind::affine_capped:
            if (!(cap >= 0.0) || !std::isfinite(cap)) fail("cap must be finite and >= 0");
            break;
        case Kind::indicator_above:
            if (!(unit >= 0.0) || !std::isfinite(unit)) fail("unit must be finite and >= 0");
            break;
        case Kind::constant:
            if (!(value >= 0.0) || !std::isfinite(value)) fail("value must be finite and >= 0");
            break;
    }
}

void ClaimModel::validate() const {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("claims: kappa must be >= 0");
    f.validate("claims.f");
    g.validate("claims.g");
    if (const auto* e = std::get_if<IndependentExponential>(&marks)) {
        if (!(e->rate_eta > 0.0) || !(e->rate_theta > 0.0))
            throw std::invalid_argument("claims.marks: exponential rates must be > 0");
    } else if (const auto* l = std::get_if<LognormalPair>(&marks)) {
        if (!(l->sigma_eta >= 0.0) || !(l->sigma_theta >= 0.0))
            throw std::invalid_argument("claims.marks: lognormal sigmas must be >= 0");
        if (!(l->rho >= -1.0 && l->rho <= 1.0))
            throw std::invalid_argument("claims.marks: correlation must lie in [-1, 1]");
    }
}

Mark ClaimModel::draw(Engine& eng) const { return std::visit(MarkSampler{eng}, marks); }

double ClaimModel::discount(double horizon, double t) const noexcept {
    return kappa == 0.0 ? 1.0 : std::exp(-kappa * (horizon - t));
}

const Mark& ClaimSequence::operator[](std::size_t ordinal) {
    while (marks_.size() <= ordinal) marks_.push_back(model_->draw(eng_));
    return marks_[ordinal];
}

std::vector<Mark> sample_claims(const ClaimModel& model, std::size_t count, const RngStream& rng) {
    ClaimSequence seq(model, rng.child(StreamDomain::claims));
    std::vector<Mark> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(seq[i]);
    return out;
}

double loss_value(const EventPath& path, const std::vector<Mark>& claims, const ClaimModel& model, double horizon) {
    return sum_losses(path, claims, model, horizon, model.f);
}

double generalized_loss_value(const EventPath& path, const std::vector<Mark>& claims, const ClaimModel& model,
                              double horizon) {
    return sum_losses(path, claims, model, horizon, model.g);
}

Payoff Payoff::stoploss(double attachment) {
    Payoff p;
    p.kind = Kind::stoploss;
    p.lower = attachment;
    return p;
}

Payoff Payoff::identity() {
    Payoff p;
    p.kind = Kind::identity;
    return p;
}

Payoff Payoff::cdf_band(double lower, double upper) {
    if (!(lower < upper)) throw std::invalid_argument("cdf_band: lower must be < upper");
    Payoff p;
    p.kind = Kind::cdf_band;
    p.lower = lower;
    p.upper = upper;
    return p;
}

Payoff Payoff::constant(double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("constant payoff must be finite and >= 0");
    Payoff p;
    p.kind = Kind::constant;
    p.value = v;
    return p;
}

double Payoff::operator()(double x) const noexcept {
    switch (kind) {
        case Kind::stoploss: return x >= lower ? 1.0 : 0.0;
        case Kind::identity: return x;
        case Kind::cdf_band: return std::clamp((x - lower) / (upper - lower), 0.0, 1.0);
        case Kind::constant: return value;
    }
    return 0.0;
}

double Payoff::sup() const noexcept {
    switch (kind) {
        case Kind::stoploss:
        case Kind::cdf_band: return 1.0;
        case Kind::identity: return std::numeric_limits<double>::infinity();
        case Kind::constant: return value;
    }
    return 0.0;
}

std::string Payoff::name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::stoploss: os << "stoploss(" << lower << ")"; break;
        case Kind::identity: os << "identity"; break;
        case Kind::cdf_band: os << "cdf_band(" << lower << ", " << upper << ")"; break;
        case Kind::constant: os << "constant(" << value << ")"; break;
    }
    return os.str();
}

void Contract::validate() const {
    if (has_band() && !(retention >= 0.0 && retention < cap))
        throw std::invalid_argument("contract: need 0 <= retention < cap");
}

double stoploss_payoff(double K, double L, double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi)) throw std::invalid_argument("stoploss_payoff: need 0 <= lo < hi");
    if (L < lo) return 0.0;
    if (L <= hi) return K - lo;
    return hi - lo;
}

TerminalLoss simulate_terminal_loss(const HawkesParams& params, const ClaimModel& model, const RngStream& stream) {
    const EventPath path = simulate_standard(params, stream);
    ClaimSequence claims(model, stream.child(StreamDomain::claims));
    TerminalLoss out;
    out.count = path.size();
    for (std::size_t i = 0; i < path.size(); ++i) {
        const Mark& m = claims[i];
        const double d = model.discount(params.horizon, path.events[i].time);
        out.L += d * model.f(m);
        out.K += d * model.g(m);
    }
    return out;
}

PremiumDecomposition premium_decomposition_mc(const Contract& contract, const HawkesParams& params,
                                              const ClaimModel& model, std::size_t n_paths, std::uint64_t seed) {
    if (!contract.has_band()) throw std::invalid_argument("decomposition requires a finite cap");
    if (n_paths < 2) throw std::invalid_argument("decomposition requires at least two paths");
    const double lo = contract.retention;
    const double hi = contract.cap;
    const auto st = parallel::reduce_stats(n_paths, 6, [&](std::size_t i, double* out) {
        const TerminalLoss tl = simulate_terminal_loss(params, model, RngStream{seed, i});
        const bool in_band = tl.L >= lo && tl.L <= hi;
        out[0] = tl.L > lo ? tl.K : 0.0;
        out[1] = in_band ? lo : 0.0;
        out[2] = tl.L >= hi ? hi - lo : 0.0;
        out[3] = out[0] - out[1] + out[2];
        out[4] = (in_band ? tl.K : 0.0) - out[1] + (tl.L > hi ? hi - lo : 0.0);
        out[5] = stoploss_payoff(tl.K, tl.L, lo, hi);
    });
    auto est = [](const Stat& s) { return Estimate{s.mean(), s.stderr_of_mean()}; };
    PremiumDecomposition d;
    d.term1 = est(st[0]);
    d.term2 = est(st[1]);
    d.term3 = est(st[2]);
    d.total = est(st[3]);
    d.band_total = est(st[4]);
    d.direct = est(st[5]);
    d.delta = std::abs(d.total.mean - d.direct.mean);
    d.band_delta = std::abs(d.band_total.mean - d.direct.mean);
    d.n_paths = n_paths;
    return d;
}

nlohmann::json to_json(const PremiumDecomposition& d) {
    auto e = [](const Estimate& x) { return nlohmann::json{{"mean", x.mean}, {"stderr", x.std_error}}; };
    return {{"term1", e(d.term1)},   {"term2", e(d.term2)},         {"term3", e(d.term3)},
            {"total", e(d.total)},   {"band_total", e(d.band_total)}, {"direct_payoff", e(d.direct)},
            {"delta", d.delta},      {"band_delta", d.band_delta},  {"n_paths", d.n_paths}};
}

}  // namespace hawkes
