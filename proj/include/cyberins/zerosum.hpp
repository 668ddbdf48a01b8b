#pragma once

// Constrained zero-sum game between the user (minimizer of K) and the
// attacker (maximizer of K) under a fixed coverage level.

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "cyberins/model.hpp"

namespace cyberins {

struct SpeDiagnostics {
    double action_ratio = 0.0;  // attack / protection
    double risk = 0.0;          // equilibrium risk R*
};

struct SpeSolution {
    ActionPair actions{0.0, 0.0};
    double payoff = 0.0;  // K at the saddle point; +inf when infeasible
    bool feasible = false;
    bool interior = false;  // strictly inside (0,1)^2
    bool near_boundary = false;
    bool clamped = false;  // closed form left [0,1]^2 and was clamped back
    SpeDiagnostics diagnostics;
};

/// clamp(gamma(1-s)/ca - protection, 0, 1).
double attacker_best_response(double protection, const UserRiskProfile& profile, double s,
                              const MarketParams& market);

/// Minimizer of K over protection for a fixed attack level. For attack > 0
/// this is the positive root of cu p^2 + cu a p - gamma(1-s) a = 0, clamped.
double user_best_response(double attack, const UserRiskProfile& profile, double s,
                          const MarketParams& market);

/// 1 - gamma(1-s) ln(cu/ca + 1). Positive iff the user is insurable at s.
double insurability_margin(const UserRiskProfile& profile, double s, const MarketParams& market);

/// Closed-form saddle point
///   p_u* = gamma(1-s)/(cu+ca),  p_a* = cu gamma(1-s) / (ca (cu+ca)).
/// Infeasible parameters yield feasible == false with payoff +inf. Values
/// above 1 are clamped and flagged interior == false; numerical_spe is
/// authoritative there.
SpeSolution closed_form_spe(const UserRiskProfile& profile, double s, const MarketParams& market);

struct NumericalSpeOptions {
    std::size_t grid_points = 2001;  // per axis; 0 skips the grid validation
    double grid_floor = 1e-6;        // lower end of the grid, keeps away from p_u = 0
    double damping = 0.5;
    int max_iterations = 10000;
    double tolerance = 1e-10;        // sup-norm of the iterate update
    int max_damping_halvings = 6;
};

struct GridSaddle {
    ActionPair actions{0.0, 0.0};  // (argmin of column maxima, argmax of row minima)
    double max_min = 0.0;
    double min_max = 0.0;
    double step = 0.0;
    double gap_tolerance = 0.0;
    bool consistent = false;  // min_max - max_min within gap_tolerance
};

struct NumericalSpe {
    SpeSolution solution;
    int iterations = 0;
    double damping_used = 0.0;
    std::optional<GridSaddle> grid;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const ActionPair& last, int iterations);

    const ActionPair& last_iterate() const { return last_; }
    int iterations() const { return iterations_; }

private:
    ActionPair last_;
    int iterations_;
};

/// Damped best-response iteration from (0.5, 0.5). If the configured
/// damping does not settle within max_iterations it is halved and the
/// iteration restarted. Throws NonConvergence once the halvings run out.
NumericalSpe numerical_spe(const UserRiskProfile& profile, double s, const MarketParams& market,
                           const NumericalSpeOptions& options = {});

/// Grid max-min / min-max of K over [floor, 1]^2 restricted to feasible pairs,
/// with the limiting value on the open feasibility edge included per row/column.
/// Ties go to the lowest index.
GridSaddle grid_minimax(const UserRiskProfile& profile, double s, const MarketParams& market,
                        std::size_t points, double floor);

/// Saddle inequalities checked against every feasible unilateral deviation
/// on a uniform grid over [0, 1].
bool verify_saddle_inequality(const ActionPair& candidate, const UserRiskProfile& profile,
                              double s, const MarketParams& market, std::size_t grid_points,
                              double tolerance = 1e-9);

// Insurability bounds. The *_derived forms follow from the feasibility
// condition directly; the *_as_published forms reproduce the expressions
// as they were originally stated and disagree with the derived ones.

/// Largest protection cost keeping the user insurable: ca (exp(1/(gamma(1-s))) - 1).
double max_insurable_user_cost_derived(const UserRiskProfile& profile, double s, double ca);
double max_insurable_user_cost_as_published(const UserRiskProfile& profile, double s, double ca);

/// Protection needed against a best-responding attacker:
/// p_u > (gamma(1-s)/ca) exp(-1/(gamma(1-s))).
double min_insurable_protection_derived(const UserRiskProfile& profile, double s, double ca);
double min_insurable_protection_as_published(const UserRiskProfile& profile, double s, double ca);

}  // namespace cyberins
