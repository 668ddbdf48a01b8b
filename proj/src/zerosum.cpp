#include "cyberins/zerosum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace cyberins {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

bool strictly_inside(const ActionPair& a) {
    return a.protection() > 0.0 && a.protection() < 1.0 && a.attack() > 0.0 && a.attack() < 1.0;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = hi;
        return grid;
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = lo + span * static_cast<double>(i) / static_cast<double>(points - 1);
    grid.back() = hi;
    return grid;
}

// Fills the feasibility/payoff fields of a solution from its actions.
void settle(SpeSolution& sol, const UserRiskProfile& profile, double s, const MarketParams& market) {
    const auto payoff = zero_sum_payoff(sol.actions, profile, s, market);
    sol.feasible = payoff.has_value();
    sol.payoff = payoff.value_or(kInf);
    sol.interior = strictly_inside(sol.actions);
    if (sol.feasible) sol.near_boundary = is_near_boundary(feasibility_margin(sol.actions, profile, s));
}

std::string nonconvergence_message(const ActionPair& last, int iterations) {
    std::ostringstream os;
    os << "best-response iteration did not converge after " << iterations
       << " iterations; last iterate (" << last.protection() << ", " << last.attack() << ")";
    return os.str();
}

}  // namespace

NonConvergence::NonConvergence(const ActionPair& last, int iterations)
    : std::runtime_error(nonconvergence_message(last, iterations)), last_(last), iterations_(iterations) {}

double attacker_best_response(double protection, const UserRiskProfile& profile, double s,
                              const MarketParams& market) {
    return clamp_unit(loss_tilt(profile, s) / market.ca() - protection);
}

double user_best_response(double attack, const UserRiskProfile& profile, double s,
                          const MarketParams& market) {
    if (!(attack >= 0.0)) throw std::invalid_argument("attack level must be nonnegative");
    if (attack == 0.0) return 0.0;
    const double cu = market.cu();
    const double tilt = loss_tilt(profile, s);
    const double disc = cu * cu * attack * attack + 4.0 * cu * tilt * attack;
    return clamp_unit((std::sqrt(disc) - cu * attack) / (2.0 * cu));
}

double insurability_margin(const UserRiskProfile& profile, double s, const MarketParams& market) {
    return 1.0 - loss_tilt(profile, s) * market.equilibrium_risk();
}

SpeSolution closed_form_spe(const UserRiskProfile& profile, double s, const MarketParams& market) {
    const double tilt = loss_tilt(profile, s);
    const double cu = market.cu();
    const double ca = market.ca();
    const double pu = tilt / (cu + ca);
    const double pa = pu * (cu / ca);  // = cu gamma(1-s) / (ca (cu+ca))

    SpeSolution sol;
    sol.actions = ActionPair(clamp_unit(pu), clamp_unit(pa));
    sol.diagnostics.risk = market.equilibrium_risk();
    sol.diagnostics.action_ratio = pu > 0.0 ? pa / pu : cu / ca;

    const double margin = insurability_margin(profile, s, market);
    if (is_feasible(margin)) {
        settle(sol, profile, s, market);
        sol.near_boundary = is_near_boundary(margin);
    } else {
        sol.feasible = false;
        sol.payoff = kInf;
    }
    sol.interior = pu > 0.0 && pu < 1.0 && pa > 0.0 && pa < 1.0;
    sol.clamped = pu > 1.0 || pa > 1.0;
    return sol;
}

GridSaddle grid_minimax(const UserRiskProfile& profile, double s, const MarketParams& market,
                        std::size_t points, double floor) {
    if (points < 2) throw std::invalid_argument("grid needs at least two points per axis");
    const auto grid = uniform_grid(floor, 1.0, points);
    const double tilt = loss_tilt(profile, s);
    const double cu = market.cu();
    const double ca = market.ca();

    // The feasible set is open along attack = protection * span. A grid
    // cannot get close to that edge for tiny protection levels, so each row
    // and column also considers the limiting value K -> 1 + cu pu - ca pa there.
    const double span = tilt > 0.0 ? std::expm1(1.0 / tilt) : kInf;

    // Rows are attack levels, columns protection levels.
    std::vector<double> col_max(points, -kInf);
    for (std::size_t i = 0; i < points; ++i) {
        const double edge = grid[i] * span;
        if (edge <= 1.0) col_max[i] = 1.0 + cu * grid[i] - ca * edge;
    }
    std::size_t best_row = points;
    double max_min = -kInf;
    for (std::size_t j = 0; j < points; ++j) {
        const double pa = grid[j];
        double row_min = kInf;
        bool any = false;
        const double edge = pa / span;
        if (edge >= floor) {
            row_min = 1.0 + cu * edge - ca * pa;
            any = true;
        }
        for (std::size_t i = 0; i < points; ++i) {
            const double pu = grid[i];
            const double loss = tilt * std::log1p(pa / pu);
            if (!(loss < 1.0)) continue;
            const double k = loss + cu * pu - ca * pa;
            any = true;
            if (k < row_min) row_min = k;
            if (k > col_max[i]) col_max[i] = k;
        }
        if (any && row_min > max_min) {
            max_min = row_min;
            best_row = j;
        }
    }
    std::size_t best_col = points;
    double min_max = kInf;
    for (std::size_t i = 0; i < points; ++i) {
        if (col_max[i] == -kInf) continue;
        if (col_max[i] < min_max) {
            min_max = col_max[i];
            best_col = i;
        }
    }
    if (best_row == points || best_col == points)
        throw DomainError("no feasible action pair on the grid");

    GridSaddle out;
    out.actions = ActionPair(grid[best_col], grid[best_row]);
    out.max_min = max_min;
    out.min_max = min_max;
    out.step = (1.0 - floor) / static_cast<double>(points - 1);
    out.gap_tolerance = (cu + ca + tilt) * out.step;
    out.consistent = (min_max - max_min) <= out.gap_tolerance;
    return out;
}

NumericalSpe numerical_spe(const UserRiskProfile& profile, double s, const MarketParams& market,
                           const NumericalSpeOptions& options) {
    if (!(options.damping > 0.0 && options.damping <= 1.0))
        throw std::invalid_argument("damping must lie in (0, 1]");

    NumericalSpe out;
    double damping = options.damping;
    double pu = 0.5;
    double pa = 0.5;
    int total = 0;
    bool converged = false;
    for (int attempt = 0; attempt <= options.max_damping_halvings && !converged; ++attempt) {
        pu = 0.5;
        pa = 0.5;
        for (int k = 0; k < options.max_iterations; ++k) {
            const double next_pu = user_best_response(pa, profile, s, market);
            const double next_pa = attacker_best_response(pu, profile, s, market);
            const double new_pu = (1.0 - damping) * pu + damping * next_pu;
            const double new_pa = (1.0 - damping) * pa + damping * next_pa;
            const double step = std::max(std::abs(new_pu - pu), std::abs(new_pa - pa));
            pu = new_pu;
            pa = new_pa;
            ++total;
            if (step <= options.tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) damping *= 0.5;
    }
    if (!converged) throw NonConvergence(ActionPair(clamp_unit(pu), clamp_unit(pa)), total);

    out.iterations = total;
    out.damping_used = damping;
    out.solution.actions = ActionPair(clamp_unit(pu), clamp_unit(pa));
    settle(out.solution, profile, s, market);
    try {
        out.solution.diagnostics.risk = risk_level(out.solution.actions);
    } catch (const DomainError&) {
        out.solution.diagnostics.risk = kInf;
    }
    out.solution.diagnostics.action_ratio = pu > 0.0 ? pa / pu : market.cu() / market.ca();

    if (options.grid_points > 0)
        out.grid = grid_minimax(profile, s, market, options.grid_points, options.grid_floor);
    return out;
}

bool verify_saddle_inequality(const ActionPair& candidate, const UserRiskProfile& profile,
                              double s, const MarketParams& market, std::size_t grid_points,
                              double tolerance) {
    const auto centre = zero_sum_payoff(candidate, profile, s, market);
    if (!centre) return false;
    const auto grid = uniform_grid(0.0, 1.0, std::max<std::size_t>(grid_points, 2));
    for (double pa : grid) {
        const auto k = zero_sum_payoff(ActionPair(candidate.protection(), pa), profile, s, market);
        if (k && *k > *centre + tolerance) return false;
    }
    for (double pu : grid) {
        const auto k = zero_sum_payoff(ActionPair(pu, candidate.attack()), profile, s, market);
        if (k && *centre > *k + tolerance) return false;
    }
    return true;
}

double max_insurable_user_cost_derived(const UserRiskProfile& profile, double s, double ca) {
    const double tilt = loss_tilt(profile, s);
    if (tilt == 0.0) return kInf;
    return ca * std::expm1(1.0 / tilt);
}

double max_insurable_user_cost_as_published(const UserRiskProfile& profile, double s, double ca) {
    return ca * -std::expm1(-loss_tilt(profile, s));
}

double min_insurable_protection_derived(const UserRiskProfile& profile, double s, double ca) {
    const double tilt = loss_tilt(profile, s);
    if (tilt == 0.0) return 0.0;
    return tilt / ca * std::exp(-1.0 / tilt);
}

double min_insurable_protection_as_published(const UserRiskProfile& profile, double s, double ca) {
    const double tilt = loss_tilt(profile, s);
    return tilt / ca * std::exp(tilt);
}

}  // namespace cyberins
