#pragma once

// Scenario configuration: flat "dotted.key = value" files merged with
// command-line overrides.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "cyberins/model.hpp"
#include "cyberins/montecarlo.hpp"

namespace cyberins {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Unvalidated values as read from a file or flags. Later sources override
/// earlier ones through merge().
struct ScenarioInput {
    std::optional<double> cu, ca, cs, gamma, s, t;
    std::optional<std::uint64_t> samples, seed, batches;

    void merge(const ScenarioInput& overrides);
};

/// Recognised keys: market.cu market.ca market.cs profile.gamma policy.s
/// policy.t sim.samples sim.seed sim.batches. Blank lines and lines
/// starting with '#' are ignored.
ScenarioInput parse_config_text(const std::string& text);
ScenarioInput load_config_file(const std::filesystem::path& path);

struct Scenario {
    MarketParams market{1.0, 1.0};
    UserRiskProfile profile{1.0};
    std::optional<double> coverage;  // policy.s
    std::optional<double> premium;   // policy.t
    SimConfig sim;

    /// Coverage, or ConfigError naming policy.s when absent.
    double require_coverage() const;

    /// The supplied policy; without a premium the zero-profit premium s R* is used.
    std::optional<InsurancePolicy> policy() const;
};

/// Validates every field; ConfigError names the offending key.
Scenario build_scenario(const ScenarioInput& input);

}  // namespace cyberins
