#include "cyberins/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

namespace cyberins {

namespace {

double t_quantile_975(std::uint64_t dof) {
    const boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(dist, 0.975);
}

void check_risk(double risk) {
    if (!(risk >= 0.0) || !std::isfinite(risk))
        throw DomainError("loss sampling needs a finite nonnegative risk level");
}

EstimateWithCI scaled(const EstimateWithCI& e, double factor) {
    return {factor * e.point, factor * e.half_width, e.sample_count};
}

}  // namespace

void SimConfig::validate() const {
    if (batch_count < 2) throw std::invalid_argument("sim.batches must be at least 2");
    if (sample_count < batch_count)
        throw std::invalid_argument("sim.samples must be at least sim.batches");
}

bool EstimateWithCI::covers(double value, double widths) const {
    return std::abs(point - value) <= widths * half_width;
}

double unit_uniform(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

LossSampler::LossSampler(double risk, std::uint64_t seed) : risk_(risk), engine_(seed) {
    check_risk(risk);
}

double LossSampler::next() {
    const double u = unit_uniform(engine_());
    if (risk_ == 0.0) return 0.0;
    return -risk_ * std::log(u);
}

std::vector<double> sample_losses(double risk, std::uint64_t count, std::uint64_t seed) {
    LossSampler sampler(risk, seed);
    std::vector<double> out(count);
    for (auto& x : out) x = sampler.next();
    return out;
}

std::vector<double> sample_losses(const ActionPair& actions, const SimConfig& config) {
    config.validate();
    return sample_losses(risk_level(actions), config.sample_count, config.seed);
}

EstimateWithCI batch_means(const std::vector<double>& values, std::uint64_t batch_count) {
    const std::uint64_t n = values.size();
    if (batch_count < 2 || n < batch_count)
        throw std::invalid_argument("batch means need at least two non-empty batches");

    double total = 0.0;
    std::vector<double> means(batch_count);
    for (std::uint64_t b = 0; b < batch_count; ++b) {
        const std::uint64_t lo = b * n / batch_count;
        const std::uint64_t hi = (b + 1) * n / batch_count;
        double sum = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) sum += values[i];
        total += sum;
        means[b] = sum / static_cast<double>(hi - lo);
    }
    const double point = total / static_cast<double>(n);

    double ss = 0.0;
    for (double m : means) ss += (m - point) * (m - point);
    const double var = ss / static_cast<double>(batch_count - 1);
    const double half = t_quantile_975(batch_count - 1) * std::sqrt(var / static_cast<double>(batch_count));
    return {point, half, n};
}

LossAccounting estimate_loss_accounting(double risk, double s, const SimConfig& config) {
    config.validate();
    checked_coverage(s);
    const auto direct = batch_means(sample_losses(risk, config.sample_count, config.seed), config.batch_count);
    return {direct, scaled(direct, 1.0 - s), scaled(direct, s)};
}

std::string to_string(MomentStatus status) {
    switch (status) {
        case MomentStatus::ok: return "ok";
        case MomentStatus::variance_unbounded: return "variance-unbounded";
        case MomentStatus::divergent: return "divergent";
    }
    return "unknown";
}

MomentEstimate estimate_exponential_moment(double risk, double tilt, const SimConfig& config) {
    config.validate();
    check_risk(risk);
    if (!(tilt >= 0.0)) throw std::invalid_argument("exponential tilt must be nonnegative");

    MomentEstimate out;
    out.tilt_risk = tilt * risk;
    if (out.tilt_risk >= 1.0) {
        out.status = MomentStatus::divergent;
        std::ostringstream os;
        os << "divergent: gamma(1-s)R = " << out.tilt_risk << " >= 1, E[H(xi)] is infinite";
        out.advisory = os.str();
    } else if (2.0 * out.tilt_risk >= 1.0) {
        out.status = MomentStatus::variance_unbounded;
        std::ostringstream os;
        os << "variance-unbounded: 2 gamma(1-s)R = " << 2.0 * out.tilt_risk
           << " >= 1, the mean exists but the confidence interval is not valid";
        out.advisory = os.str();
    }

    auto values = sample_losses(risk, config.sample_count, config.seed);
    for (auto& x : values) x = std::exp(tilt * x);
    out.estimate = batch_means(values, config.batch_count);
    return out;
}

MomentEstimate estimate_loss_factor(double risk, const UserRiskProfile& profile, double s,
                                    const SimConfig& config) {
    return estimate_exponential_moment(risk, loss_tilt(profile, s), config);
}

DivergenceReport divergence_probe(double risk, const UserRiskProfile& profile, double s,
                                  std::uint64_t seed, const std::vector<std::uint64_t>& stages,
                                  double required_growth) {
    if (stages.empty()) throw std::invalid_argument("divergence probe needs at least one stage");
    if (!std::is_sorted(stages.begin(), stages.end()) || stages.front() == 0)
        throw std::invalid_argument("divergence probe stages must be positive and increasing");

    const double tilt = loss_tilt(profile, s);
    DivergenceReport out;
    out.divergent_regime = tilt * risk >= 1.0;

    LossSampler sampler(risk, seed);
    double sum = 0.0;
    std::uint64_t drawn = 0;
    for (std::uint64_t target : stages) {
        for (; drawn < target; ++drawn) sum += std::exp(tilt * sampler.next());
        out.stages.push_back({target, sum / static_cast<double>(target)});
    }
    for (std::size_t k = 1; k < out.stages.size(); ++k)
        out.monotone = out.monotone && out.stages[k].estimate > out.stages[k - 1].estimate;
    out.growth = out.stages.back().estimate / out.stages.front().estimate;
    out.stabilized = !(out.growth >= required_growth);
    return out;
}

std::vector<std::uint64_t> decade_stages(std::uint64_t max_samples) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1000; n <= max_samples; n *= 10) out.push_back(n);
    if (out.empty()) out.push_back(max_samples);
    return out;
}

}  // namespace cyberins
