#include "cyberins/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace cyberins {

namespace {

std::string_view trim(std::string_view v) {
    const auto ws = " \t\r";
    const auto b = v.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = v.find_last_not_of(ws);
    return v.substr(b, e - b + 1);
}

double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ConfigError("invalid number for '" + std::string(key) + "': '" + std::string(text) + "'");
    return v;
}

std::uint64_t parse_count(std::string_view key, std::string_view text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ConfigError("invalid unsigned integer for '" + std::string(key) + "': '" +
                          std::string(text) + "'");
    return v;
}

template <class T>
void override_with(std::optional<T>& slot, const std::optional<T>& value) {
    if (value) slot = value;
}

template <class F>
auto named(const char* key, F&& make) {
    try {
        return make();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

}  // namespace

void ScenarioInput::merge(const ScenarioInput& o) {
    override_with(cu, o.cu);
    override_with(ca, o.ca);
    override_with(cs, o.cs);
    override_with(gamma, o.gamma);
    override_with(s, o.s);
    override_with(t, o.t);
    override_with(samples, o.samples);
    override_with(seed, o.seed);
    override_with(batches, o.batches);
}

ScenarioInput parse_config_text(const std::string& text) {
    ScenarioInput in;
    std::istringstream lines(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        if (key == "market.cu") in.cu = parse_real(key, value);
        else if (key == "market.ca") in.ca = parse_real(key, value);
        else if (key == "market.cs") in.cs = parse_real(key, value);
        else if (key == "profile.gamma") in.gamma = parse_real(key, value);
        else if (key == "policy.s") in.s = parse_real(key, value);
        else if (key == "policy.t") in.t = parse_real(key, value);
        else if (key == "sim.samples") in.samples = parse_count(key, value);
        else if (key == "sim.seed") in.seed = parse_count(key, value);
        else if (key == "sim.batches") in.batches = parse_count(key, value);
        else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
    return in;
}

ScenarioInput load_config_file(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse_config_text(buf.str());
}

double Scenario::require_coverage() const {
    if (!coverage) throw ConfigError("policy.s is required (--s)");
    return *coverage;
}

std::optional<InsurancePolicy> Scenario::policy() const {
    if (!coverage) return std::nullopt;
    return InsurancePolicy(*coverage, premium.value_or(*coverage * market.equilibrium_risk()));
}

Scenario build_scenario(const ScenarioInput& in) {
    if (!in.cu) throw ConfigError("market.cu is required (--cu)");
    if (!in.ca) throw ConfigError("market.ca is required (--ca)");
    if (!in.gamma) throw ConfigError("profile.gamma is required (--gamma)");

    // Validate one field at a time so the message names the culprit.
    named("market.cu", [&] { return MarketParams(*in.cu, 1.0); });
    named("market.ca", [&] { return MarketParams(1.0, *in.ca); });
    Scenario sc{
        named("market.cs", [&] { return MarketParams(*in.cu, *in.ca, in.cs.value_or(0.0)); }),
        named("profile.gamma", [&] { return UserRiskProfile(*in.gamma); }),
        std::nullopt,
        std::nullopt,
        {},
    };
    if (in.s) sc.coverage = named("policy.s", [&] { return checked_coverage(*in.s); });
    if (in.t) {
        named("policy.t", [&] { return InsurancePolicy(0.0, *in.t); });
        sc.premium = in.t;
    }
    if (in.samples) sc.sim.sample_count = *in.samples;
    if (in.seed) sc.sim.seed = *in.seed;
    if (in.batches) sc.sim.batch_count = *in.batches;
    named("sim", [&] {
        sc.sim.validate();
        return 0;
    });
    return sc;
}

}  // namespace cyberins
