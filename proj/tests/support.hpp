#pragma once

#include <cmath>
#include <cstddef>

namespace test_support {

inline double poisson_pmf(double lambda, int k) {
    return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

// |a - b| <= k * sigma, with sigma the combined error
inline bool within_sigma(double a, double b, double sigma, double k = 3.0) { return std::abs(a - b) <= k * sigma; }

}  // namespace test_support
