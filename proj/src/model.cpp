#include "cyberins/model.hpp"

#include <cmath>
#include <sstream>

namespace cyberins {

namespace {

std::string describe(const char* name, double value) {
    std::ostringstream os;
    os << name << " = " << value;
    return os.str();
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

MarketParams::MarketParams(double cu, double ca, double cs) : cu_(cu), ca_(ca), cs_(cs) {
    if (!(cu > 0.0) || !std::isfinite(cu))
        throw std::invalid_argument(describe("cu must be positive, got cu", cu));
    if (!(ca > 0.0) || !std::isfinite(ca))
        throw std::invalid_argument(describe("ca must be positive, got ca", ca));
    if (!(cs >= 0.0) || !std::isfinite(cs))
        throw std::invalid_argument(describe("cs must be nonnegative, got cs", cs));
}

double MarketParams::equilibrium_risk() const { return std::log1p(cu_ / ca_); }

UserRiskProfile::UserRiskProfile(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument(describe("gamma must be positive, got gamma", gamma));
}

InsurancePolicy::InsurancePolicy(double coverage, double premium)
    : coverage_(coverage), premium_(premium) {
    if (!in_unit_interval(coverage))
        throw std::invalid_argument(describe("coverage must lie in [0,1], got s", coverage));
    if (!(premium >= 0.0) || !std::isfinite(premium))
        throw std::invalid_argument(describe("premium must be nonnegative, got T", premium));
}

ActionPair::ActionPair(double protection, double attack)
    : protection_(protection), attack_(attack) {
    if (!in_unit_interval(protection))
        throw std::invalid_argument(describe("protection must lie in [0,1], got p_u", protection));
    if (!in_unit_interval(attack))
        throw std::invalid_argument(describe("attack must lie in [0,1], got p_a", attack));
}

double checked_coverage(double s) {
    if (!in_unit_interval(s))
        throw std::invalid_argument(describe("coverage must lie in [0,1], got s", s));
    return s;
}

double risk_level(const ActionPair& actions) {
    const double pu = actions.protection();
    const double pa = actions.attack();
    if (pa == 0.0) return 0.0;  // also covers the (0, 0) convention
    if (pu == 0.0)
        throw DomainError(describe("risk is unbounded for zero protection under attack p_a", pa));
    return std::log1p(pa / pu);
}

double loss_tilt(const UserRiskProfile& profile, double s) {
    return profile.gamma() * (1.0 - checked_coverage(s));
}

FiniteOrDivergent expected_loss_factor(double risk, const UserRiskProfile& profile, double s) {
    if (!(risk >= 0.0)) throw std::invalid_argument(describe("risk must be nonnegative, got R", risk));
    const double denom = 1.0 - loss_tilt(profile, s) * risk;
    if (!(denom > 0.0)) return std::nullopt;
    return 1.0 / denom;
}

double feasibility_margin(const ActionPair& actions, const UserRiskProfile& profile, double s) {
    return 1.0 - loss_tilt(profile, s) * risk_level(actions);
}

bool is_feasible(double margin) { return margin > 0.0; }

bool is_near_boundary(double margin) { return margin > 0.0 && margin < kNearBoundaryMargin; }

FiniteOrDivergent zero_sum_payoff(const ActionPair& actions, const UserRiskProfile& profile,
                                  double s, const MarketParams& market) {
    double risk = 0.0;
    try {
        risk = risk_level(actions);
    } catch (const DomainError&) {
        return std::nullopt;
    }
    const double tilt = loss_tilt(profile, s);
    if (!is_feasible(1.0 - tilt * risk)) return std::nullopt;
    return tilt * risk + market.cu() * actions.protection() - market.ca() * actions.attack();
}

double loss_density(double x, double risk) {
    if (!(x >= 0.0)) throw std::invalid_argument(describe("loss must be nonnegative, got x", x));
    if (risk == 0.0) throw DomainError("zero risk is a point mass at 0 and has no density");
    if (!(risk > 0.0)) throw std::invalid_argument(describe("risk must be nonnegative, got R", risk));
    return std::exp(-x / risk) / risk;
}

double loss_density(double x, const ActionPair& actions) { return loss_density(x, risk_level(actions)); }

}  // namespace cyberins
