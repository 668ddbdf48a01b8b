#pragma once

// The insurer's contract design: participation constraints, the linear
// program over (coverage, premium) and the bi-level equilibrium.

#include <string>
#include <vector>

#include "cyberins/model.hpp"
#include "cyberins/report.hpp"

namespace cyberins {

inline constexpr double kBindingTolerance = 1e-9;
inline constexpr double kStrictClosure = 1e-9;

/// Largest premium the user accepts: T_max = R* = ln(cu/ca + 1).
double premium_cap(const MarketParams& market);

/// Smallest coverage the user accepts at premium T: s0 = T / R*.
/// Throws DomainError when T exceeds the cap.
double min_coverage(double premium, const MarketParams& market);

/// Coverage above which the user is insurable: 1 - 1/(gamma R*).
double coverage_floor(const MarketParams& market, const UserRiskProfile& profile);

struct ConstraintVerdict {
    bool ir_user = false;              // T <= T_max
    bool ic_user = false;              // s >= T / R*
    bool ir_insurer = false;           // T - s R* >= 0
    bool feasibility_insurer = false;  // s > 1 - 1/(gamma R*)
    std::vector<std::string> binding;  // "IR-u", "IC-u", "IR-i", "F-i"

    bool all() const { return ir_user && ic_user && ir_insurer && feasibility_insurer; }
};

ConstraintVerdict check_constraints(const InsurancePolicy& policy, const MarketParams& market,
                                    const UserRiskProfile& profile);

/// J_i(s, T) = gamma (1-s) R* + cs (s R* - T).
double insurer_objective(double s, double premium, const MarketParams& market,
                         const UserRiskProfile& profile);

struct InsurerOptimum {
    InsurancePolicy policy{1.0, 0.0};
    double objective = 0.0;
    std::vector<std::string> binding;
};

/// Minimizes J_i over the constraint polygon by enumerating its vertices.
/// The strict insurability constraint is closed by kStrictClosure. Ties go
/// to larger coverage, then larger premium.
InsurerOptimum solve_insurer_lp(const MarketParams& market, const UserRiskProfile& profile);

struct BgneSolution {
    InsurancePolicy policy{1.0, 0.0};
    ActionPair actions{0.0, 0.0};
    double insurer_objective = 0.0;
    double user_payoff = 0.0;
    double zero_profit_check = 0.0;  // T - s R*
    EquilibriumReport report;
};

/// Insurer LP followed by the saddle point under the optimal policy.
BgneSolution compose_bgne(const MarketParams& market, const UserRiskProfile& profile);

}  // namespace cyberins
