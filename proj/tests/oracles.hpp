#pragma once

// Test-only reference computations. Nothing here calls into the library's
// solver code paths; formulas are restated from scratch.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

// K with the feasibility restriction; nullopt when infeasible or undefined.
inline std::optional<double> payoff(double pu, double pa, double gamma, double s, double cu, double ca,
                                    bool constrained = true) {
    if (pa > 0.0 && pu == 0.0) return std::nullopt;
    const double risk = pa == 0.0 ? 0.0 : std::log((pa + pu) / pu);
    const double loss = gamma * (1.0 - s) * risk;
    if (constrained && !(loss < 1.0)) return std::nullopt;
    return loss + cu * pu - ca * pa;
}

// Attacker's best reply by exhaustive search over a grid on [0, 1].
// With constrained == false the feasibility restriction is ignored, which is
// what the closed-form reply maximizes.
inline double grid_best_attack(double pu, double gamma, double s, double cu, double ca, std::size_t n,
                               bool constrained = true) {
    double best = -std::numeric_limits<double>::infinity(), arg = 0.0;
    for (double pa : linspace(0.0, 1.0, n)) {
        const auto k = payoff(pu, pa, gamma, s, cu, ca, constrained);
        if (k && *k > best) {
            best = *k;
            arg = pa;
        }
    }
    return arg;
}

// User's best reply by exhaustive search over a grid on [1e-9, 1].
inline double grid_best_protection(double pa, double gamma, double s, double cu, double ca, std::size_t n) {
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (double pu : linspace(1e-9, 1.0, n)) {
        const auto k = payoff(pu, pa, gamma, s, cu, ca);
        if (k && *k < best) {
            best = *k;
            arg = pu;
        }
    }
    return arg;
}

// Integral of f over [lo, hi] by adaptive Gauss-Kronrod.
template <class F>
double integrate(F f, double lo, double hi) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

// Integral of f over [0, inf).
template <class F>
double integrate_half_line(F f) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

}  // namespace oracle
