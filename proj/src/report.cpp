#include "cyberins/report.hpp"

namespace cyberins {

EquilibriumReport make_report(const SpeSolution& spe, const InsurancePolicy& policy) {
    EquilibriumReport r;
    r.actions = spe.actions;
    r.policy = policy;
    r.feasible = spe.feasible;
    r.interior = spe.interior;
    r.near_boundary = spe.near_boundary;
    const double s = policy.coverage();
    r.risk = spe.diagnostics.risk;
    r.expected_direct_loss = r.risk;
    r.expected_effective_loss = (1.0 - s) * r.risk;
    r.expected_payout = s * r.risk;
    return r;
}

}  // namespace cyberins
