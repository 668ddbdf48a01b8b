#include "cyberins/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "cyberins/contract.hpp"
#include "cyberins/montecarlo.hpp"
#include "cyberins/zerosum.hpp"

namespace cyberins::cli {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<std::string>& items, const char* sep) {
    if (items.empty()) return "none";
    std::string out = items.front();
    for (std::size_t i = 1; i < items.size(); ++i) out += sep + items[i];
    return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? kInf : j.get<double>(); }

Section key_values(std::string title, std::vector<std::pair<std::string, std::string>> kv) {
    Section sec{std::move(title), {"field", "value"}, {}};
    for (auto& [k, v] : kv) sec.rows.push_back({std::move(k), std::move(v)});
    return sec;
}

struct Equilibrium {
    SpeSolution spe;
    bool outside_interior_analysis = false;
    EquilibriumReport report;
};

// Closed form where it applies; clamped best-response iteration otherwise.
Equilibrium solve_equilibrium(const UserRiskProfile& profile, double s, const MarketParams& market,
                              const InsurancePolicy& policy, bool validate_on_grid) {
    Equilibrium eq;
    eq.spe = closed_form_spe(profile, s, market);
    if (eq.spe.feasible && eq.spe.clamped) {
        NumericalSpeOptions opts;
        if (!validate_on_grid) opts.grid_points = 0;
        eq.spe = numerical_spe(profile, s, market, opts).solution;
        eq.outside_interior_analysis = true;
    }
    eq.report = make_report(eq.spe, policy);
    return eq;
}

std::string insurability_note(const UserRiskProfile& profile, double s, const MarketParams& market) {
    std::ostringstream os;
    os << "not insurable: 1 - gamma(1-s) ln(cu/ca+1) = "
       << format_number(insurability_margin(profile, s, market)) << " <= 0";
    return os.str();
}

void render_table(std::ostream& os, const Section& sec) {
    if (!sec.title.empty()) os << "== " << sec.title << " ==\n";
    std::vector<std::size_t> width(sec.header.size(), 0);
    auto grow = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    };
    grow(sec.header);
    for (const auto& r : sec.rows) grow(r);
    auto line = [&](const std::vector<std::string>& row) {
        std::string text;
        for (std::size_t i = 0; i < row.size(); ++i) {
            text += row[i];
            if (i + 1 < row.size()) text += std::string(width[i] - row[i].size() + 2, ' ');
        }
        os << text << '\n';
    };
    line(sec.header);
    for (const auto& r : sec.rows) line(r);
}

void render_csv(std::ostream& os, const Section& sec) {
    auto line = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    };
    line(sec.header);
    for (const auto& r : sec.rows) line(r);
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

std::string render(const CommandOutput& output, Format format) {
    std::ostringstream os;
    switch (format) {
        case Format::json: {
            json j = output.json;
            j["notes"] = output.notes;
            j["exit_code"] = output.exit_code;
            os << j.dump(2) << '\n';
            break;
        }
        case Format::csv:
            for (std::size_t i = 0; i < output.sections.size(); ++i) {
                if (i) os << '\n';
                render_csv(os, output.sections[i]);
            }
            break;
        case Format::table:
            for (std::size_t i = 0; i < output.sections.size(); ++i) {
                if (i) os << '\n';
                render_table(os, output.sections[i]);
            }
            for (const auto& n : output.notes) os << "note: " << n << '\n';
            break;
    }
    return os.str();
}

json to_json(const EquilibriumReport& r) {
    return {
        {"p_u", r.actions.protection()},
        {"p_a", r.actions.attack()},
        {"risk", number_or_null(r.risk)},
        {"expected_direct_loss", number_or_null(r.expected_direct_loss)},
        {"expected_effective_loss", number_or_null(r.expected_effective_loss)},
        {"expected_payout", number_or_null(r.expected_payout)},
        {"s", r.policy.coverage()},
        {"t", r.policy.premium()},
        {"feasible", r.feasible},
        {"interior", r.interior},
        {"near_boundary", r.near_boundary},
    };
}

EquilibriumReport report_from_json(const json& j) {
    EquilibriumReport r;
    r.actions = ActionPair(j.at("p_u").get<double>(), j.at("p_a").get<double>());
    r.risk = number_from(j.at("risk"));
    r.expected_direct_loss = number_from(j.at("expected_direct_loss"));
    r.expected_effective_loss = number_from(j.at("expected_effective_loss"));
    r.expected_payout = number_from(j.at("expected_payout"));
    r.policy = InsurancePolicy(j.at("s").get<double>(), j.at("t").get<double>());
    r.feasible = j.at("feasible").get<bool>();
    r.interior = j.at("interior").get<bool>();
    r.near_boundary = j.at("near_boundary").get<bool>();
    return r;
}

json to_json(const Scenario& sc) {
    json j{
        {"market", {{"cu", sc.market.cu()}, {"ca", sc.market.ca()}, {"cs", sc.market.cs()}}},
        {"profile", {{"gamma", sc.profile.gamma()}}},
        {"sim",
         {{"samples", sc.sim.sample_count}, {"seed", sc.sim.seed}, {"batches", sc.sim.batch_count}}},
    };
    j["policy"] = json::object();
    if (sc.coverage) j["policy"]["s"] = *sc.coverage;
    if (sc.premium) j["policy"]["t"] = *sc.premium;
    return j;
}

Scenario scenario_from_json(const json& j) {
    ScenarioInput in;
    in.cu = j.at("market").at("cu").get<double>();
    in.ca = j.at("market").at("ca").get<double>();
    in.cs = j.at("market").at("cs").get<double>();
    in.gamma = j.at("profile").at("gamma").get<double>();
    const auto& pol = j.at("policy");
    if (pol.contains("s")) in.s = pol.at("s").get<double>();
    if (pol.contains("t")) in.t = pol.at("t").get<double>();
    in.samples = j.at("sim").at("samples").get<std::uint64_t>();
    in.seed = j.at("sim").at("seed").get<std::uint64_t>();
    in.batches = j.at("sim").at("batches").get<std::uint64_t>();
    return build_scenario(in);
}

CommandOutput cmd_spe(const Scenario& sc) {
    const double s = sc.require_coverage();
    const auto policy = *sc.policy();
    const auto eq = solve_equilibrium(sc.profile, s, sc.market, policy, true);
    const auto& r = eq.report;

    CommandOutput out;
    const auto factor = expected_loss_factor(r.risk, sc.profile, s);
    const double margin = 1.0 - loss_tilt(sc.profile, s) * r.risk;
    out.sections.push_back(key_values(
        "saddle-point equilibrium",
        {{"p_u", format_number(r.actions.protection())},
         {"p_a", format_number(r.actions.attack())},
         {"ratio", format_number(eq.spe.diagnostics.action_ratio)},
         {"risk", format_number(r.risk)},
         {"expected_direct_loss", format_number(r.expected_direct_loss)},
         {"expected_effective_loss", format_number(r.expected_effective_loss)},
         {"expected_payout", format_number(r.expected_payout)},
         {"expected_disutility", factor ? format_number(*factor) : "divergent"},
         {"payoff", format_number(eq.spe.payoff)},
         {"margin", format_number(margin)},
         {"s", format_number(policy.coverage())},
         {"t", format_number(policy.premium())},
         {"feasible", yes_no(r.feasible)},
         {"interior", yes_no(r.interior)},
         {"near_boundary", yes_no(r.near_boundary)},
         {"outside_interior_analysis", yes_no(eq.outside_interior_analysis)}}));

    out.json = {{"command", "spe"},
                {"scenario", to_json(sc)},
                {"report", to_json(r)},
                {"ratio", eq.spe.diagnostics.action_ratio},
                {"payoff", number_or_null(eq.spe.payoff)},
                {"expected_disutility", factor ? json(*factor) : json("divergent")},
                {"margin", margin},
                {"outside_interior_analysis", eq.outside_interior_analysis}};
    if (eq.outside_interior_analysis)
        out.notes.push_back("closed form leaves [0,1]^2; clamped best-response solution reported");
    if (r.near_boundary) out.notes.push_back("equilibrium lies within 1e-9 of the insurability boundary");
    if (!r.feasible) {
        out.notes.push_back(insurability_note(sc.profile, s, sc.market));
        out.exit_code = kNotInsurable;
    }
    return out;
}

CommandOutput cmd_policy(const Scenario& sc) {
    const auto opt = solve_insurer_lp(sc.market, sc.profile);
    const double zero_profit = opt.policy.premium() - opt.policy.coverage() * sc.market.equilibrium_risk();

    CommandOutput out;
    out.sections.push_back(key_values("optimal policy",
                                      {{"s_opt", format_number(opt.policy.coverage())},
                                       {"t_opt", format_number(opt.policy.premium())},
                                       {"objective", format_number(opt.objective)},
                                       {"binding", join(opt.binding, ";")},
                                       {"zero_profit_check", format_number(zero_profit)},
                                       {"premium_cap", format_number(premium_cap(sc.market))},
                                       {"coverage_floor",
                                        format_number(coverage_floor(sc.market, sc.profile))}}));
    out.json = {{"command", "policy"},
                {"scenario", to_json(sc)},
                {"s_opt", opt.policy.coverage()},
                {"t_opt", opt.policy.premium()},
                {"objective", opt.objective},
                {"binding", opt.binding},
                {"zero_profit_check", zero_profit}};

    if (const auto supplied = sc.policy()) {
        const auto v = check_constraints(*supplied, sc.market, sc.profile);
        out.sections.push_back(key_values("supplied policy",
                                          {{"s", format_number(supplied->coverage())},
                                           {"t", format_number(supplied->premium())},
                                           {"IR-u", yes_no(v.ir_user)},
                                           {"IC-u", yes_no(v.ic_user)},
                                           {"IR-i", yes_no(v.ir_insurer)},
                                           {"F-i", yes_no(v.feasibility_insurer)},
                                           {"binding", join(v.binding, ";")}}));
        out.json["supplied"] = {{"s", supplied->coverage()},
                                {"t", supplied->premium()},
                                {"ir_user", v.ir_user},
                                {"ic_user", v.ic_user},
                                {"ir_insurer", v.ir_insurer},
                                {"feasibility_insurer", v.feasibility_insurer},
                                {"binding", v.binding}};
    }
    return out;
}

CommandOutput cmd_bgne(const Scenario& sc) {
    const auto b = compose_bgne(sc.market, sc.profile);
    const auto& r = b.report;
    CommandOutput out;
    out.sections.push_back(key_values("bi-level equilibrium",
                                      {{"s_opt", format_number(b.policy.coverage())},
                                       {"t_opt", format_number(b.policy.premium())},
                                       {"p_u", format_number(b.actions.protection())},
                                       {"p_a", format_number(b.actions.attack())},
                                       {"insurer_objective", format_number(b.insurer_objective)},
                                       {"user_payoff", format_number(b.user_payoff)},
                                       {"risk", format_number(r.risk)},
                                       {"expected_direct_loss", format_number(r.expected_direct_loss)},
                                       {"expected_effective_loss", format_number(r.expected_effective_loss)},
                                       {"expected_payout", format_number(r.expected_payout)},
                                       {"zero_profit_check", format_number(b.zero_profit_check)}}));
    out.json = {{"command", "bgne"},
                {"scenario", to_json(sc)},
                {"report", to_json(r)},
                {"insurer_objective", b.insurer_objective},
                {"user_payoff", b.user_payoff},
                {"zero_profit_check", b.zero_profit_check}};
    return out;
}

CommandOutput cmd_simulate(const Scenario& sc) {
    const double s = sc.require_coverage();
    const auto eq = solve_equilibrium(sc.profile, s, sc.market, *sc.policy(), false);
    const double risk = eq.report.risk;
    const auto acc = estimate_loss_accounting(risk, s, sc.sim);

    CommandOutput out;
    Section table{"monte carlo vs analytic", {"quantity", "analytic", "estimate", "half_width", "status"}, {}};
    json rows = json::array();
    auto add = [&](const std::string& name, double analytic, const EstimateWithCI& e, std::string status) {
        if (status.empty()) status = e.covers(analytic, 3.0) ? "pass" : "fail";
        table.rows.push_back({name, format_number(analytic), format_number(e.point),
                              format_number(e.half_width), status});
        rows.push_back({{"quantity", name},
                        {"analytic", number_or_null(analytic)},
                        {"estimate", number_or_null(e.point)},
                        {"half_width", number_or_null(e.half_width)},
                        {"status", status}});
    };
    add("E(X)", risk, acc.direct, "");
    add("E(xi)", (1.0 - s) * risk, acc.effective, "");
    add("E(sX)", s * risk, acc.payout, "");

    const auto moment = estimate_loss_factor(risk, sc.profile, s, sc.sim);
    const auto analytic = expected_loss_factor(risk, sc.profile, s);
    if (!moment.advisory.empty()) out.notes.push_back(moment.advisory);
    switch (moment.status) {
        case MomentStatus::ok: add("E[H(xi)]", *analytic, moment.estimate, ""); break;
        case MomentStatus::variance_unbounded:
            add("E[H(xi)]", *analytic, moment.estimate, "advisory");
            break;
        case MomentStatus::divergent: {
            table.rows.push_back({"E[H(xi)]", "divergent", format_number(moment.estimate.point),
                                  format_number(moment.estimate.half_width), "divergent"});
            rows.push_back({{"quantity", "E[H(xi)]"},
                            {"analytic", "divergent"},
                            {"estimate", number_or_null(moment.estimate.point)},
                            {"half_width", number_or_null(moment.estimate.half_width)},
                            {"status", "divergent"}});
            break;
        }
    }
    out.sections.push_back(std::move(table));
    out.json = {{"command", "simulate"}, {"scenario", to_json(sc)}, {"rows", rows}};

    if (moment.status == MomentStatus::divergent) {
        const auto probe = divergence_probe(risk, sc.profile, s, sc.sim.seed,
                                            decade_stages(sc.sim.sample_count));
        Section stages{"divergence probe", {"samples", "estimate"}, {}};
        json jstages = json::array();
        for (const auto& st : probe.stages) {
            stages.rows.push_back({std::to_string(st.samples), format_number(st.estimate)});
            jstages.push_back({{"samples", st.samples}, {"estimate", number_or_null(st.estimate)}});
        }
        out.sections.push_back(std::move(stages));
        out.json["divergence_probe"] = {{"stages", jstages},
                                        {"growth", number_or_null(probe.growth)},
                                        {"monotone", probe.monotone},
                                        {"stabilized", probe.stabilized}};
        out.notes.push_back("divergence probe growth " + format_number(probe.growth) +
                            (probe.stabilized ? " (stabilized)" : " (no stabilization)"));
    }
    if (!eq.spe.feasible) {
        out.notes.push_back(insurability_note(sc.profile, s, sc.market));
        out.exit_code = kNotInsurable;
    }
    return out;
}

CommandOutput cmd_sweep(const Scenario& sc, const std::string& parameter, double from, double to,
                        int steps) {
    static const std::vector<std::string> known{"s", "gamma", "cu", "ca", "cs"};
    if (std::find(known.begin(), known.end(), parameter) == known.end())
        throw ConfigError("unknown sweep parameter '" + parameter + "' (expected s, gamma, cu, ca or cs)");
    if (steps < 2) throw ConfigError("--steps must be at least 2");

    std::vector<std::string> header;
    {
        std::string h = kSweepHeader;
        std::size_t pos = 0;
        while (pos != std::string::npos) {
            const auto next = h.find(',', pos);
            header.push_back(h.substr(pos, next == std::string::npos ? next : next - pos));
            pos = next == std::string::npos ? next : next + 1;
        }
    }
    Section table{"", header, {}};
    json rows = json::array();

    for (int k = 0; k < steps; ++k) {
        const double v = k + 1 == steps ? to : from + (to - from) * k / (steps - 1);
        double cu = sc.market.cu(), ca = sc.market.ca(), cs = sc.market.cs();
        double gamma = sc.profile.gamma();
        double s = parameter == "s" ? v : sc.require_coverage();
        if (parameter == "gamma") gamma = v;
        if (parameter == "cu") cu = v;
        if (parameter == "ca") ca = v;
        if (parameter == "cs") cs = v;

        std::optional<MarketParams> market;
        std::optional<UserRiskProfile> profile;
        try {
            market.emplace(cu, ca, cs);
            profile.emplace(gamma);
            checked_coverage(s);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("sweep value " + format_number(v) + " for '" + parameter + "': " + e.what());
        }

        const auto opt = solve_insurer_lp(*market, *profile);
        const InsurancePolicy policy(s, s * market->equilibrium_risk());
        const auto eq = solve_equilibrium(*profile, s, *market, policy, false);
        const auto& r = eq.report;

        std::vector<std::string> row{format_number(v)};
        json jrow{{"value", v}, {"s_opt", opt.policy.coverage()}, {"t_opt", opt.policy.premium()},
                  {"feasible", r.feasible}, {"interior", r.interior}};
        if (r.feasible) {
            row.insert(row.end(), {format_number(r.actions.protection()), format_number(r.actions.attack()),
                                   format_number(eq.spe.diagnostics.action_ratio), format_number(r.risk),
                                   format_number(r.expected_effective_loss)});
            jrow["p_u"] = r.actions.protection();
            jrow["p_a"] = r.actions.attack();
            jrow["ratio"] = eq.spe.diagnostics.action_ratio;
            jrow["risk"] = r.risk;
            jrow["expected_effective_loss"] = r.expected_effective_loss;
        } else {
            row.insert(row.end(), 5, "");
            for (const char* key : {"p_u", "p_a", "ratio", "risk", "expected_effective_loss"})
                jrow[key] = nullptr;
        }
        row.insert(row.end(), {format_number(opt.policy.coverage()), format_number(opt.policy.premium()),
                               yes_no(r.feasible), yes_no(r.interior)});
        table.rows.push_back(std::move(row));
        rows.push_back(std::move(jrow));
    }

    CommandOutput out;
    out.sections.push_back(std::move(table));
    out.json = {{"command", "sweep"}, {"scenario", to_json(sc)}, {"parameter", parameter}, {"rows", rows}};
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Attack-aware cyber-insurance solver"};
    app.require_subcommand(1);

    ScenarioInput flags;
    std::string config_path;
    std::string out_path;
    std::string format_name;
    std::string sweep_param;
    double sweep_from = 0.0;
    double sweep_to = 1.0;
    int sweep_steps = 11;

    auto shared = [&](CLI::App* sub) {
        sub->add_option("--cu", flags.cu, "cost of protection effort");
        sub->add_option("--ca", flags.ca, "cost of attack effort");
        sub->add_option("--cs", flags.cs, "insurer profit-vs-safety weight");
        sub->add_option("--gamma", flags.gamma, "risk aversion");
        sub->add_option("--s", flags.s, "coverage level");
        sub->add_option("--t", flags.t, "premium");
        sub->add_option("--config", config_path, "scenario file (dotted key = value)");
        sub->add_option("--seed", flags.seed, "simulation seed");
        sub->add_option("--samples", flags.samples, "simulation sample count");
        sub->add_option("--batches", flags.batches, "batch count for confidence intervals");
        sub->add_option("--out", out_path, "write output to this file");
        sub->add_option("--format", format_name, "table, json or csv")
            ->check(CLI::IsMember({"table", "json", "csv"}));
    };

    auto* spe = app.add_subcommand("spe", "saddle-point equilibrium for a coverage level");
    auto* policy = app.add_subcommand("policy", "insurer's optimal policy");
    auto* bgne = app.add_subcommand("bgne", "bi-level equilibrium");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the loss model");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep as CSV");
    for (auto* sub : {spe, policy, bgne, simulate, sweep}) shared(sub);
    sweep->add_option("--param", sweep_param, "s, gamma, cu, ca or cs")->required();
    sweep->add_option("--from", sweep_from, "first value");
    sweep->add_option("--to", sweep_to, "last value");
    sweep->add_option("--steps", sweep_steps, "number of values");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kConfigError;
    }

    try {
        ScenarioInput input;
        if (!config_path.empty()) input = load_config_file(config_path);
        input.merge(flags);
        const Scenario sc = build_scenario(input);

        Format format = format_name == "json"  ? Format::json
                        : format_name == "csv" ? Format::csv
                                               : Format::table;
        CommandOutput result;
        if (spe->parsed()) result = cmd_spe(sc);
        else if (policy->parsed()) result = cmd_policy(sc);
        else if (bgne->parsed()) result = cmd_bgne(sc);
        else if (simulate->parsed()) result = cmd_simulate(sc);
        else {
            if (format_name.empty()) format = Format::csv;
            result = cmd_sweep(sc, sweep_param, sweep_from, sweep_to, sweep_steps);
        }

        const std::string text = render(result, format);
        if (out_path.empty()) {
            out << text;
        } else {
            std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
            if (!file) throw ConfigError("cannot write output file '" + out_path + "'");
            file << text;
        }
        if (format == Format::csv)
            for (const auto& n : result.notes) err << "note: " << n << '\n';
        return result.exit_code;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace cyberins::cli
