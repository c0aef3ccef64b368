#include "hawkes/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hawkes {

namespace {

struct Evaluator {
    double t;
    double operator()(const ExponentialKernel& k) const { return k.alpha * std::exp(-k.beta * t); }
    double operator()(const ConstantKernel& k) const { return t <= k.support ? k.c : 0.0; }
    double operator()(const TableKernel& k) const {
        const auto& kn = k.knots;
        if (t >= kn.back().first) return t == kn.back().first ? kn.back().second : 0.0;
        auto it = std::upper_bound(kn.begin(), kn.end(), t,
                                   [](double x, const auto& knot) { return x < knot.first; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double w = (t - lo.first) / (hi.first - lo.first);
        return lo.second + w * (hi.second - lo.second);
    }
};

}  // namespace

Kernel::Kernel(ExponentialKernel k) : family_(k) {
    if (!(k.alpha >= 0.0) || !std::isfinite(k.alpha)) throw std::invalid_argument("exponential kernel: alpha must be >= 0");
    if (!(k.beta > 0.0) || !std::isfinite(k.beta)) throw std::invalid_argument("exponential kernel: beta must be > 0");
    l1_ = k.alpha / k.beta;
    sup_ = k.alpha;
    non_increasing_ = true;
    finalize();
}

Kernel::Kernel(ConstantKernel k) : family_(k) {
    if (!(k.c >= 0.0) || !std::isfinite(k.c)) throw std::invalid_argument("constant kernel: c must be >= 0");
    if (!(k.support > 0.0) || !std::isfinite(k.support)) throw std::invalid_argument("constant kernel: support must be > 0");
    l1_ = k.c * k.support;
    sup_ = k.c;
    non_increasing_ = true;
    finalize();
}

Kernel::Kernel(TableKernel k, bool declared_non_increasing) : family_(std::move(k)) {
    const auto& kn = std::get<TableKernel>(family_).knots;
    if (kn.size() < 2) throw std::invalid_argument("table kernel: at least two knots required");
    if (kn.front().first != 0.0) throw std::invalid_argument("table kernel: first knot must be at t = 0");
    double l1 = 0.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < kn.size(); ++i) {
        if (!(kn[i].second >= 0.0) || !std::isfinite(kn[i].second))
            throw std::invalid_argument("table kernel: rates must be finite and >= 0");
        if (i > 0) {
            if (!(kn[i].first > kn[i - 1].first)) throw std::invalid_argument("table kernel: knot times must increase strictly");
            l1 += 0.5 * (kn[i].second + kn[i - 1].second) * (kn[i].first - kn[i - 1].first);
        }
        sup = std::max(sup, kn[i].second);
    }
    l1_ = l1;
    sup_ = sup;
    non_increasing_ = declared_non_increasing;
    finalize();
}

void Kernel::finalize() {
    if (!(l1_ < 1.0)) {
        std::ostringstream os;
        os << "kernel is not stable: ||Phi||_1 = " << l1_ << " must be < 1";
        throw std::invalid_argument(os.str());
    }
}

double Kernel::eval(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("kernel evaluated at negative time");
    return eval_unchecked(t);
}

double Kernel::eval_unchecked(double t) const noexcept { return std::visit(Evaluator{t}, family_); }

std::vector<double> Kernel::breakpoints() const {
    std::vector<double> out;
    if (const auto* c = std::get_if<ConstantKernel>(&family_)) {
        out.push_back(c->support);
    } else if (const auto* tab = std::get_if<TableKernel>(&family_)) {
        for (const auto& [t, r] : tab->knots)
            if (t > 0.0) out.push_back(t);
    }
    return out;
}

std::string Kernel::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (const auto* e = std::get_if<ExponentialKernel>(&family_)) {
        os << "exponential(alpha=" << e->alpha << ", beta=" << e->beta << ")";
    } else if (const auto* c = std::get_if<ConstantKernel>(&family_)) {
        os << "constant(c=" << c->c << ", support=" << c->support << ")";
    } else {
        os << "table(" << std::get<TableKernel>(family_).knots.size() << " knots)";
    }
    return os.str();
}

bool scan_non_increasing(const Kernel& kernel, double horizon, int steps) {
    const double h = horizon / steps;
    double prev = kernel.eval_unchecked(0.0);
    for (int i = 1; i <= steps; ++i) {
        const double v = kernel.eval_unchecked(i * h);
        if (v > prev) return false;
        prev = v;
    }
    return true;
}

HawkesParams::HawkesParams(double mu_, Kernel kernel_, double horizon_)
    : mu(mu_), kernel(std::move(kernel_)), horizon(horizon_) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("hawkes params: mu must be > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("hawkes params: horizon must be > 0");
    if (kernel.non_increasing() && !scan_non_increasing(kernel, horizon))
        throw std::invalid_argument("kernel declared non-increasing but increases on [0, horizon]");
}

double mean_intensity_bound(const HawkesParams& params) noexcept {
    const double n = params.kernel.l1_norm();
    return params.mu * (1.0 + n / (1.0 - n));
}

}  // namespace hawkes
