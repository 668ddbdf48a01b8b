#include "cyberins/contract.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "cyberins/zerosum.hpp"

namespace cyberins {

namespace {

// a_s * s + a_t * T <= b
struct HalfPlane {
    double a_s;
    double a_t;
    double b;
    const char* name;
};

struct Vertex {
    double s;
    double t;
};

std::optional<Vertex> intersect(const HalfPlane& p, const HalfPlane& q) {
    const double det = p.a_s * q.a_t - p.a_t * q.a_s;
    if (det == 0.0) return std::nullopt;
    return Vertex{(p.b * q.a_t - p.a_t * q.b) / det, (p.a_s * q.b - p.b * q.a_s) / det};
}

bool satisfies(const HalfPlane& h, const Vertex& v) {
    const double lhs = h.a_s * v.s + h.a_t * v.t;
    return lhs <= h.b + 1e-12 * (1.0 + std::abs(h.b));
}

}  // namespace

double premium_cap(const MarketParams& market) { return market.equilibrium_risk(); }

double min_coverage(double premium, const MarketParams& market) {
    if (!(premium >= 0.0)) throw std::invalid_argument("premium must be nonnegative");
    const double cap = premium_cap(market);
    if (premium > cap) {
        std::ostringstream os;
        os << "premium " << premium << " exceeds the cap " << cap << "; no coverage suffices";
        throw DomainError(os.str());
    }
    if (premium == cap) return 1.0;
    return premium / cap;
}

double coverage_floor(const MarketParams& market, const UserRiskProfile& profile) {
    return 1.0 - 1.0 / (profile.gamma() * market.equilibrium_risk());
}

ConstraintVerdict check_constraints(const InsurancePolicy& policy, const MarketParams& market,
                                    const UserRiskProfile& profile) {
    const double s = policy.coverage();
    const double t = policy.premium();
    const double r = market.equilibrium_risk();

    const double ir_u = r - t;
    const double ic_u = s - t / r;
    const double ir_i = t - s * r;
    const double f_i = s - coverage_floor(market, profile);

    ConstraintVerdict v;
    v.ir_user = ir_u >= 0.0;
    v.ic_user = s * r >= t;  // s >= T/R* without the division's rounding
    v.ir_insurer = ir_i >= 0.0;
    v.feasibility_insurer = f_i > 0.0;
    const std::array<std::pair<double, const char*>, 4> slacks{
        {{ir_u, "IR-u"}, {ic_u, "IC-u"}, {ir_i, "IR-i"}, {f_i, "F-i"}}};
    for (const auto& [slack, name] : slacks)
        if (std::abs(slack) < kBindingTolerance) v.binding.emplace_back(name);
    return v;
}

double insurer_objective(double s, double premium, const MarketParams& market,
                         const UserRiskProfile& profile) {
    const double r = market.equilibrium_risk();
    return profile.gamma() * (1.0 - s) * r + market.cs() * (s * r - premium);
}

InsurerOptimum solve_insurer_lp(const MarketParams& market, const UserRiskProfile& profile) {
    const double r = market.equilibrium_risk();
    const double floor = coverage_floor(market, profile) + kStrictClosure;
    const std::array<HalfPlane, 7> planes{{
        {-1.0, 0.0, 0.0, "s>=0"},
        {1.0, 0.0, 1.0, "s<=1"},
        {0.0, -1.0, 0.0, "T>=0"},
        {0.0, 1.0, r, "IR-u"},
        {-r, 1.0, 0.0, "IC-u"},
        {r, -1.0, 0.0, "IR-i"},
        {-1.0, 0.0, -floor, "F-i"},
    }};

    auto violation = [&](const Vertex& v) {
        double worst = 0.0;
        for (const auto& h : planes) worst = std::max(worst, h.a_s * v.s + h.a_t * v.t - h.b);
        return worst;
    };
    auto same_point = [](const Vertex& a, const Vertex& b) {
        return std::abs(a.s - b.s) <= 1e-12 * (1.0 + std::abs(a.s)) &&
               std::abs(a.t - b.t) <= 1e-12 * (1.0 + std::abs(a.t));
    };

    // Several line pairs meet at the same vertex; among those copies keep the
    // one with the smallest rounding violation.
    std::optional<Vertex> best;
    double best_obj = 0.0;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        for (std::size_t j = i + 1; j < planes.size(); ++j) {
            const auto v = intersect(planes[i], planes[j]);
            if (!v) continue;
            bool inside = true;
            for (const auto& h : planes) inside = inside && satisfies(h, *v);
            if (!inside) continue;
            const double obj = insurer_objective(v->s, v->t, market, profile);
            bool better = !best;
            if (best) {
                const double tie = 1e-12 * (1.0 + std::abs(best_obj));
                if (obj < best_obj - tie) better = true;
                else if (obj <= best_obj + tie) {
                    if (same_point(*v, *best)) better = violation(*v) < violation(*best);
                    else better = v->s > best->s || (v->s == best->s && v->t > best->t);
                }
            }
            if (better) {
                best = v;
                best_obj = obj;
            }
        }
    }
    if (!best) throw DomainError("insurer constraint set is empty");

    // Vertices may sit a rounding error outside the box.
    const double s = std::clamp(best->s, 0.0, 1.0);
    const double t = std::max(best->t, 0.0);
    InsurerOptimum out{InsurancePolicy(s, t), insurer_objective(s, t, market, profile), {}};
    out.binding = check_constraints(out.policy, market, profile).binding;
    return out;
}

BgneSolution compose_bgne(const MarketParams& market, const UserRiskProfile& profile) {
    const auto optimum = solve_insurer_lp(market, profile);
    const double s = optimum.policy.coverage();
    const auto spe = closed_form_spe(profile, s, market);
    if (!spe.feasible) throw DomainError("user is not insurable under the optimal policy");

    BgneSolution out;
    out.policy = optimum.policy;
    out.actions = spe.actions;
    out.insurer_objective = optimum.objective;
    out.user_payoff = spe.payoff;
    out.zero_profit_check = optimum.policy.premium() - s * market.equilibrium_risk();
    out.report = make_report(spe, optimum.policy);

    const InsurancePolicy expected_policy(1.0, premium_cap(market));
    if (!(out.policy == expected_policy) || !(out.actions == ActionPair(0.0, 0.0)))
        throw std::logic_error("bi-level equilibrium deviates from (0, 0, {1, ln(cu/ca + 1)})");
    return out;
}

}  // namespace cyberins
