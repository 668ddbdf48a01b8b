#pragma once

// Command-line front end: spe, policy, bgne, simulate, sweep.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyberins/report.hpp"
#include "cyberins/scenario.hpp"

namespace cyberins::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 2,
    kNotInsurable = 3,
    kNonConvergence = 4,
};

enum class Format { table, json, csv };

/// Fixed sweep CSV header.
inline constexpr const char* kSweepHeader =
    "value,p_u,p_a,ratio,risk,expected_effective_loss,s_opt,t_opt,feasible,interior";

/// 9 significant digits, '.' decimal point regardless of locale.
std::string format_number(double v);

struct Section {
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct CommandOutput {
    std::vector<Section> sections;
    nlohmann::json json = nlohmann::json::object();
    std::vector<std::string> notes;  // advisories, printed verbatim
    int exit_code = kSuccess;
};

std::string render(const CommandOutput& output, Format format);

CommandOutput cmd_spe(const Scenario& scenario);
CommandOutput cmd_policy(const Scenario& scenario);
CommandOutput cmd_bgne(const Scenario& scenario);
CommandOutput cmd_simulate(const Scenario& scenario);
CommandOutput cmd_sweep(const Scenario& scenario, const std::string& parameter, double from,
                        double to, int steps);

nlohmann::json to_json(const EquilibriumReport& report);
EquilibriumReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

/// Parses arguments (args[0] is the program name), runs the subcommand and
/// writes the rendered result to --out or `out`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cyberins::cli
