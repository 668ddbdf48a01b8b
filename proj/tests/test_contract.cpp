#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cyberins/contract.hpp"
#include "oracles.hpp"

using namespace cyberins;
using doctest::Approx;

namespace {

bool has(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

// Exhaustive search over (s, T) in [0,1] x [0, T_max], constraints restated.
double grid_insurer_optimum(double cu, double ca, double gamma, double cs, std::size_t n) {
    const double r = std::log(cu / ca + 1.0);
    const double floor = 1.0 - 1.0 / (gamma * r);
    double best = INFINITY;
    for (double s : oracle::linspace(0.0, 1.0, n))
        for (double t : oracle::linspace(0.0, r, n)) {
            const double tol = 1e-12;
            if (t > r + tol || s < t / r - tol || t - s * r < -tol || !(s > floor)) continue;
            best = std::min(best, gamma * (1 - s) * r + cs * (s * r - t));
        }
    return best;
}

}  // namespace

TEST_CASE("premium cap examples") {
    CHECK(premium_cap(MarketParams(1.0, 1.0)) == Approx(0.693147180559945).epsilon(1e-14));
    CHECK(premium_cap(MarketParams(1e-12, 1.0)) < 1e-11);
    CHECK(premium_cap(MarketParams(1.0, 3.0)) == Approx(0.287682072451781).epsilon(1e-14));
}

TEST_CASE("premium cap monotone in costs") {
    const auto grid = oracle::linspace(0.1, 10.0, 100);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(premium_cap(MarketParams(grid[i], 1.0)) > premium_cap(MarketParams(grid[i - 1], 1.0)));
        CHECK(premium_cap(MarketParams(1.0, grid[i])) < premium_cap(MarketParams(1.0, grid[i - 1])));
    }
}

TEST_CASE("min coverage examples") {
    const MarketParams unit(1.0, 1.0);
    CHECK(min_coverage(0.0, MarketParams(3.0, 0.2)) == 0.0);
    CHECK(min_coverage(0.5 * std::log(2.0), unit) == Approx(0.5).epsilon(1e-15));
    CHECK(min_coverage(premium_cap(unit), unit) == 1.0);
    CHECK_THROWS_AS(min_coverage(0.7, unit), DomainError);
    CHECK_THROWS_AS(min_coverage(-0.1, unit), std::invalid_argument);
}

TEST_CASE("constraint verdict examples") {
    const MarketParams unit(1.0, 1.0);
    auto v = check_constraints(InsurancePolicy(1.0, std::log(2.0)), unit, UserRiskProfile(1.0));
    CHECK(v.all());
    CHECK(has(v.binding, "IR-i"));
    CHECK(has(v.binding, "IC-u"));
    CHECK(has(v.binding, "IR-u"));  // T sits at the cap as well
    CHECK_FALSE(has(v.binding, "F-i"));

    v = check_constraints(InsurancePolicy(0.2, 0.0), unit, UserRiskProfile(2.0));
    CHECK_FALSE(v.feasibility_insurer);
    CHECK(coverage_floor(unit, UserRiskProfile(2.0)) == Approx(0.278652479555518).epsilon(1e-13));

    v = check_constraints(InsurancePolicy(0.0, 0.0), unit, UserRiskProfile(1.0));
    CHECK(v.ir_user);
    CHECK(v.ic_user);
    CHECK(v.ir_insurer);
    CHECK(v.feasibility_insurer);
    CHECK(coverage_floor(unit, UserRiskProfile(1.0)) == Approx(-0.442695040888963).epsilon(1e-13));

    v = check_constraints(InsurancePolicy(0.5, 0.6), unit, UserRiskProfile(1.0));
    CHECK_FALSE(v.ic_user);  // needs s >= 0.6/ln 2
    CHECK(v.ir_insurer);
}

TEST_CASE("linear policy principle on sampled points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const MarketParams m(0.1 + 5 * unit(rng), 0.1 + 5 * unit(rng));
        const UserRiskProfile p(0.1 + 3 * unit(rng));
        const double r = premium_cap(m);
        const double s = unit(rng);
        // half the points exactly on the line T = s R*
        const double t = i % 2 ? s * r : r * unit(rng);
        const auto v = check_constraints(InsurancePolicy(s, t), m, p);
        if (!v.ir_user || !v.feasibility_insurer) continue;
        const bool on_line = std::abs(t - s * r) <= 1e-12 * (1 + r);
        CHECK((v.ir_insurer && v.ic_user) == on_line);
    }
}

TEST_CASE("insurer LP examples") {
    auto opt = solve_insurer_lp(MarketParams(1.0, 1.0, 1.0), UserRiskProfile(1.0));
    CHECK(opt.policy.coverage() == 1.0);
    CHECK(opt.policy.premium() == Approx(0.693147180559945).epsilon(1e-14));
    CHECK(opt.objective == Approx(0.0));
    CHECK(std::abs(grid_insurer_optimum(1.0, 1.0, 1.0, 1.0, 1001) - opt.objective) < 1e-6);

    opt = solve_insurer_lp(MarketParams(1.0, 3.0, 0.5), UserRiskProfile(2.0));
    CHECK(opt.policy.coverage() == 1.0);
    CHECK(opt.policy.premium() == Approx(0.287682072451781).epsilon(1e-14));
    CHECK(opt.objective == Approx(0.0));

    opt = solve_insurer_lp(MarketParams(1.0, 1.0, 0.0), UserRiskProfile(1.0));
    CHECK(opt.policy.coverage() == 1.0);
    CHECK(opt.policy.premium() == Approx(0.693147180559945).epsilon(1e-14));
}

TEST_CASE("insurer LP optimum shape and zero profit on random markets") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const MarketParams m(0.05 + 8 * unit(rng), 0.05 + 8 * unit(rng), 4 * unit(rng));
        const UserRiskProfile p(0.05 + 6 * unit(rng));
        const auto opt = solve_insurer_lp(m, p);
        CHECK(opt.policy.coverage() == 1.0);
        CHECK(opt.policy.premium() == premium_cap(m));
        CHECK(std::abs(opt.policy.premium() - opt.policy.coverage() * m.equilibrium_risk()) <= 1e-12);
    }
}

TEST_CASE("BGNE composition examples") {
    auto b = compose_bgne(MarketParams(1.0, 1.0, 1.0), UserRiskProfile(1.0));
    CHECK(b.actions == ActionPair(0.0, 0.0));
    CHECK(b.policy.coverage() == 1.0);
    CHECK(b.policy.premium() == Approx(0.693147180559945).epsilon(1e-14));
    CHECK(b.zero_profit_check == 0.0);
    CHECK(b.user_payoff == 0.0);
    CHECK(b.report.expected_effective_loss == 0.0);
    CHECK(b.report.expected_payout == Approx(std::log(2.0)).epsilon(1e-15));

    b = compose_bgne(MarketParams(2.0, 1.0, 2.0), UserRiskProfile(3.0));
    CHECK(b.actions == ActionPair(0.0, 0.0));
    CHECK(b.policy.premium() == Approx(1.09861228866811).epsilon(1e-14));

    for (double gamma : {0.3, 1.0, 7.0})
        for (double cs : {0.0, 0.4, 9.0})
            CHECK(compose_bgne(MarketParams(2.5, 2.5, cs), UserRiskProfile(gamma)).policy.premium() ==
                  Approx(std::log(2.0)).epsilon(1e-15));
}
