#pragma once

// Seeded simulation of the exponential loss model.
//
// Generator: std::mt19937_64 seeded directly with the 64-bit seed. Its
// output sequence is fixed by the C++ standard. Uniforms are formed from
// the top 52 bits as (k + 0.5) / 2^52, which lies strictly inside (0, 1),
// and losses by inversion X = -R ln(U). Results are bit-identical for a
// given seed on any platform whose libm rounds log/exp the same way.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cyberins/model.hpp"

namespace cyberins {

struct SimConfig {
    std::uint64_t sample_count = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t batch_count = 50;

    /// Throws std::invalid_argument unless sample_count >= batch_count >= 2.
    void validate() const;
};

struct EstimateWithCI {
    double point = 0.0;
    double half_width = 0.0;  // 95% batch-means half-width
    std::uint64_t sample_count = 0;

    bool covers(double value, double widths = 1.0) const;
};

class LossSampler {
public:
    LossSampler(double risk, std::uint64_t seed);

    double next();

private:
    double risk_;
    std::mt19937_64 engine_;
};

/// Open-interval uniform built from one generator output.
double unit_uniform(std::uint64_t bits);

std::vector<double> sample_losses(double risk, std::uint64_t count, std::uint64_t seed);
std::vector<double> sample_losses(const ActionPair& actions, const SimConfig& config);

/// Batch-means estimate over a precomputed sample vector.
EstimateWithCI batch_means(const std::vector<double>& values, std::uint64_t batch_count);

struct LossAccounting {
    EstimateWithCI direct;     // E(X)
    EstimateWithCI effective;  // E(xi) = (1-s) E(X), same stream
    EstimateWithCI payout;     // E(sX) = s E(X), same stream
};

LossAccounting estimate_loss_accounting(double risk, double s, const SimConfig& config);

enum class MomentStatus {
    ok,                  // finite mean and variance; the CI is meaningful
    variance_unbounded,  // finite mean, infinite variance; the CI is not valid
    divergent,           // the mean itself is infinite
};

std::string to_string(MomentStatus status);

struct MomentEstimate {
    EstimateWithCI estimate;
    MomentStatus status = MomentStatus::ok;
    double tilt_risk = 0.0;  // t R; variance needs 2 t R < 1, the mean t R < 1
    std::string advisory;    // empty when status is ok
};

/// Empirical E[exp(t X)] for X exponential with mean R.
MomentEstimate estimate_exponential_moment(double risk, double tilt, const SimConfig& config);

/// Empirical E[H(xi)] = E[exp(gamma (1-s) X)].
MomentEstimate estimate_loss_factor(double risk, const UserRiskProfile& profile, double s,
                                    const SimConfig& config);

struct DivergenceStage {
    std::uint64_t samples = 0;
    double estimate = 0.0;
};

struct DivergenceReport {
    std::vector<DivergenceStage> stages;
    double growth = 1.0;          // last / first
    bool monotone = true;         // strictly increasing across stages
    bool divergent_regime = false;  // gamma (1-s) R >= 1
    bool stabilized = true;       // growth below the required factor
};

/// Running estimate of E[exp(gamma (1-s) X)] on one stream, read off at each
/// (increasing) stage sample count.
DivergenceReport divergence_probe(double risk, const UserRiskProfile& profile, double s,
                                  std::uint64_t seed, const std::vector<std::uint64_t>& stages,
                                  double required_growth = 10.0);

/// 10^3, 10^4, ... up to and including max_samples when it is a power of ten.
std::vector<std::uint64_t> decade_stages(std::uint64_t max_samples);

}  // namespace cyberins
