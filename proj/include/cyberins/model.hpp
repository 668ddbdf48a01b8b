#pragma once

// Domain types and primitive formulas of the attack-aware insurance model.
//
// The user picks a protection level, the attacker an attack level, both in
// [0,1]. Their ratio sets the risk level R, which is the mean of an
// exponentially distributed loss X. A linear policy reimburses sX and the
// risk-averse user evaluates the remaining loss through H(x) = exp(gamma*x).

#include <optional>
#include <stdexcept>
#include <string>

namespace cyberins {

/// Thrown when a formula is evaluated outside the region where it is defined.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Cost of protection effort (cu), cost of attack effort (ca) and the
/// insurer's profit-vs-safety weight (cs).
class MarketParams {
public:
    MarketParams(double cu, double ca, double cs = 0.0);

    double cu() const { return cu_; }
    double ca() const { return ca_; }
    double cs() const { return cs_; }

    /// Risk level every interior saddle point settles on: ln(cu/ca + 1).
    double equilibrium_risk() const;

private:
    double cu_;
    double ca_;
    double cs_;
};

class UserRiskProfile {
public:
    explicit UserRiskProfile(double gamma);

    double gamma() const { return gamma_; }

private:
    double gamma_;
};

/// Linear contract: reimburse coverage * X for a flat premium.
class InsurancePolicy {
public:
    InsurancePolicy(double coverage, double premium);

    double coverage() const { return coverage_; }
    double premium() const { return premium_; }

    friend bool operator==(const InsurancePolicy&, const InsurancePolicy&) = default;

private:
    double coverage_;
    double premium_;
};

class ActionPair {
public:
    ActionPair(double protection, double attack);

    double protection() const { return protection_; }
    double attack() const { return attack_; }

    friend bool operator==(const ActionPair&, const ActionPair&) = default;

private:
    double protection_;
    double attack_;
};

/// Finite value, or std::nullopt when the expectation diverges.
using FiniteOrDivergent = std::optional<double>;

/// Checks 0 <= s <= 1 and throws std::invalid_argument otherwise.
double checked_coverage(double s);

/// R = ln(attack/protection + 1).
///
/// No attack gives zero risk. The idle state (0, 0) is assigned zero risk by
/// convention so that the full-coverage equilibrium has finite accounting.
/// Attack against zero protection is unbounded and throws DomainError.
double risk_level(const ActionPair& actions);

/// gamma*(1-s): the exponent applied to the raw loss by the user's disutility.
double loss_tilt(const UserRiskProfile& profile, double s);

/// E[H(xi)] = 1 / (1 - gamma*(1-s)*R), or nullopt once the denominator is
/// no longer positive.
FiniteOrDivergent expected_loss_factor(double risk, const UserRiskProfile& profile, double s);

/// 1 - gamma*(1-s)*R(actions). Positive exactly on the feasible action set.
double feasibility_margin(const ActionPair& actions, const UserRiskProfile& profile, double s);

/// Margins in (0, kNearBoundaryMargin) are feasible but numerically marginal.
inline constexpr double kNearBoundaryMargin = 1e-9;

bool is_feasible(double margin);
bool is_near_boundary(double margin);

/// K = gamma*(1-s)*R + cu*protection - ca*attack; nullopt (infinite cost)
/// when the pair is infeasible. Pairs where risk_level throws are infeasible.
FiniteOrDivergent zero_sum_payoff(const ActionPair& actions, const UserRiskProfile& profile,
                                  double s, const MarketParams& market);

/// Exponential density (1/R) exp(-x/R) at x with R = risk_level(actions).
/// Zero risk is a point mass at 0 and throws DomainError.
double loss_density(double x, const ActionPair& actions);
double loss_density(double x, double risk);

}  // namespace cyberins
