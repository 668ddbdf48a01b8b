#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cyberins/model.hpp"
#include "cyberins/montecarlo.hpp"

using namespace cyberins;
using doctest::Approx;

namespace {

SimConfig config(std::uint64_t n, std::uint64_t seed, std::uint64_t batches = 50) {
    SimConfig c;
    c.sample_count = n;
    c.seed = seed;
    c.batch_count = batches;
    return c;
}

}  // namespace

TEST_CASE("sim config validation") {
    CHECK_THROWS_AS(config(10, 1, 1).validate(), std::invalid_argument);
    CHECK_THROWS_AS(config(5, 1, 10).validate(), std::invalid_argument);
    CHECK_NOTHROW(config(2, 1, 2).validate());
}

TEST_CASE("uniforms stay strictly inside (0, 1)") {
    CHECK(unit_uniform(0) > 0.0);
    CHECK(unit_uniform(~std::uint64_t{0}) < 1.0);
}

TEST_CASE("generator output is pinned") {
    // std::mt19937_64 is fully specified: its 10000th output from the default seed.
    std::mt19937_64 engine;
    engine.discard(9999);
    CHECK(engine() == 9981545732273789042ULL);

    // Golden values for seed 42, frozen from the first run.
    const auto xs = sample_losses(std::log(2.0), 3, 42);
    CHECK(xs[0] == 0x1.8ea8a424ebea3p-3);
    CHECK(xs[1] == 0x1.3dd786eff5aap-2);
    CHECK(xs[2] == 0x1.945438302b48p-3);
    LossSampler again(std::log(2.0), 42);
    for (double x : xs) CHECK(x == again.next());
}

TEST_CASE("sample_losses examples") {
    const double ln2 = std::log(2.0);
    const auto xs = sample_losses(ln2, 1'000'000, 42);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    CHECK(std::abs(mean - ln2) < 0.002);

    for (double x : sample_losses(0.0, 1000, 42)) CHECK(x == 0.0);
    CHECK(sample_losses(ln2, 1000, 9) == sample_losses(ln2, 1000, 9));
    CHECK(sample_losses(ln2, 1000, 9) != sample_losses(ln2, 1000, 10));
    CHECK_THROWS_AS(sample_losses(-1.0, 10, 1), DomainError);

    const auto via_actions = sample_losses(ActionPair(1.0, 1.0), config(100, 5, 2));
    CHECK(via_actions == sample_losses(risk_level(ActionPair(1.0, 1.0)), 100, 5));
}

TEST_CASE("batch means on a known sequence") {
    // Batches {1,2}, {3,4}: means 1.5 and 3.5, sd sqrt(2), t(0.975, 1) = 12.7062.
    const auto e = batch_means({1.0, 2.0, 3.0, 4.0}, 2);
    CHECK(e.point == 2.5);
    CHECK(e.half_width == Approx(12.7062047361747 * std::sqrt(2.0) / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(e.sample_count == 4);
    CHECK(e.covers(2.5));
    CHECK_FALSE(e.covers(100.0));
}

TEST_CASE("loss accounting examples") {
    const double ln2 = std::log(2.0);
    auto acc = estimate_loss_accounting(ln2, 0.5, config(1'000'000, 42));
    CHECK(acc.direct.covers(ln2, 3.0));
    CHECK(acc.effective.covers(0.5 * ln2, 3.0));
    CHECK(acc.payout.covers(0.5 * ln2, 3.0));

    acc = estimate_loss_accounting(ln2, 1.0, config(10'000, 42));
    CHECK(acc.effective.point == 0.0);
    CHECK(acc.effective.half_width == 0.0);
    acc = estimate_loss_accounting(ln2, 0.0, config(10'000, 42));
    CHECK(acc.payout.point == 0.0);
}

TEST_CASE("accounting estimates scale exactly on one stream") {
    const double ln2 = std::log(2.0);
    for (double s : {0.1, 0.37, 0.5, 0.9}) {
        const auto acc = estimate_loss_accounting(ln2, s, config(20'000, 3));
        CHECK(acc.effective.point == (1.0 - s) * acc.direct.point);
        CHECK(acc.payout.point == s * acc.direct.point);
        CHECK(acc.payout.half_width == s * acc.direct.half_width);
    }
}

TEST_CASE("loss factor estimate examples") {
    const double ln2 = std::log(2.0);
    auto est = estimate_loss_factor(ln2, UserRiskProfile(1.0), 0.5, config(1'000'000, 42));
    CHECK(est.status == MomentStatus::ok);
    CHECK(est.advisory.empty());
    CHECK(std::abs(est.estimate.point - 1.5303942190345) / 1.5303942190345 < 0.01);

    // Zero tilt makes H constant.
    est = estimate_exponential_moment(ln2, 0.0, config(1000, 1));
    CHECK(est.estimate.point == 1.0);
    CHECK(est.estimate.half_width == 0.0);
    est = estimate_loss_factor(ln2, UserRiskProfile(3.0), 1.0, config(1000, 1));
    CHECK(est.estimate.point == 1.0);

    est = estimate_loss_factor(ln2, UserRiskProfile(1.6), 0.0, config(10'000, 1));
    CHECK(est.status == MomentStatus::divergent);
    CHECK(est.advisory.find("divergent") == 0);

    // 2 t R in [1, 2): mean finite, variance not.
    est = estimate_loss_factor(ln2, UserRiskProfile(1.0), 0.0, config(10'000, 1));
    CHECK(est.status == MomentStatus::variance_unbounded);
    CHECK(est.advisory.find("variance-unbounded") == 0);
    CHECK(to_string(MomentStatus::variance_unbounded) == "variance-unbounded");
}

TEST_CASE("divergence probe examples") {
    const auto stages = decade_stages(1'000'000);
    REQUIRE(stages.size() == 4);

    const auto bad = divergence_probe(std::log(101.0), UserRiskProfile(2.0), 0.0, 42, stages);
    CHECK(bad.divergent_regime);
    CHECK(bad.growth >= 10.0);
    CHECK_FALSE(bad.stabilized);

    const auto good = divergence_probe(std::log(2.0), UserRiskProfile(1.0), 0.5, 42, stages);
    CHECK_FALSE(good.divergent_regime);
    CHECK(good.stabilized);
    CHECK(std::abs(good.stages.back().estimate - 1.5304) < 0.02);

    const auto flat = divergence_probe(0.0, UserRiskProfile(2.0), 0.0, 42, stages);
    for (const auto& st : flat.stages) CHECK(st.estimate == 1.0);

    CHECK_THROWS_AS(divergence_probe(1.0, UserRiskProfile(1.0), 0.0, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(divergence_probe(1.0, UserRiskProfile(1.0), 0.0, 1, {100, 10}), std::invalid_argument);
}
