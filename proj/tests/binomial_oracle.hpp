#ifndef PARISIAN_TESTS_BINOMIAL_ORACLE_HPP
#define PARISIAN_TESTS_BINOMIAL_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

// Cox-Ross-Rubinstein tree for the vanilla call with a continuous dividend yield.
// Test-only oracle, kept independent of the grid solver it checks.
namespace parisian::testing {

inline double binomial_call(double S, double K, double r, double D, double sigma, double T,
                            bool american, int steps) {
    const double dt = T / steps;
    const double u = std::exp(sigma * std::sqrt(dt));
    const double d = 1.0 / u;
    const double growth = std::exp((r - D) * dt);
    const double p = (growth - d) / (u - d);
    const double disc = std::exp(-r * dt);

    std::vector<double> v(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        const double sT = S * std::pow(u, steps - i) * std::pow(d, i);
        v[i] = std::max(sT - K, 0.0);
    }
    for (int n = steps - 1; n >= 0; --n) {
        for (int i = 0; i <= n; ++i) {
            v[i] = disc * (p * v[i] + (1.0 - p) * v[i + 1]);
            if (american) {
                const double sN = S * std::pow(u, n - i) * std::pow(d, i);
                v[i] = std::max(v[i], sN - K);
            }
        }
    }
    return v[0];
}

}  // namespace parisian::testing

#endif
