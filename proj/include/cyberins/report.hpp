#pragma once

#include "cyberins/model.hpp"
#include "cyberins/zerosum.hpp"

namespace cyberins {

/// Outcome of the user/attacker game under a given policy, with the loss
/// accounting E(X) = R, E(xi) = (1-s) R, E(sX) = s R.
struct EquilibriumReport {
    ActionPair actions{0.0, 0.0};
    double risk = 0.0;
    double expected_direct_loss = 0.0;
    double expected_effective_loss = 0.0;
    double expected_payout = 0.0;
    InsurancePolicy policy{0.0, 0.0};
    bool feasible = false;
    bool interior = false;
    bool near_boundary = false;

    friend bool operator==(const EquilibriumReport&, const EquilibriumReport&) = default;
};

/// Builds the report from a saddle point. The risk is the solution's
/// equilibrium risk, so the full-coverage limit (0, 0) keeps R* = ln(cu/ca+1).
/// Infeasible solutions keep the finite mean accounting; only E[H(xi)] diverges.
EquilibriumReport make_report(const SpeSolution& spe, const InsurancePolicy& policy);

}  // namespace cyberins
