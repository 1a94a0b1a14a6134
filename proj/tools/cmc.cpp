// Command-line front end: `select` ranks all predictor subsets of a CSV
// dataset, `simulate` runs scenario files and reports FIR/FAR per criterion.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmc/cmc.hpp"

namespace {

std::vector<cmc::CriterionSpec> parse_criteria(const std::vector<std::string>& names) {
    std::vector<cmc::CriterionSpec> specs;
    specs.reserve(names.size());
    for (const auto& name : names) specs.push_back(cmc::criterion_from_name(name));
    return specs;
}

std::tuple<std::string, std::string, double> parse_map_entry(const std::string& arg) {
    const auto eq = arg.find('=');
    const auto colon = arg.find(':', eq == std::string::npos ? 0 : eq + 1);
    if (eq == std::string::npos || colon == std::string::npos || eq == 0 ||
        colon + 1 >= arg.size()) {
        throw cmc::Error("--map expects COL=LEVEL:VALUE, got '" + arg + "'");
    }
    const std::string column = arg.substr(0, eq);
    const std::string level = arg.substr(eq + 1, colon - eq - 1);
    const std::string value = arg.substr(colon + 1);
    if (value != "0" && value != "1") {
        throw cmc::Error("--map value must be 0 or 1, got '" + value + "'");
    }
    return {column, level, value == "1" ? 1.0 : 0.0};
}

int run_select(const std::string& data_path, const std::string& response,
               const std::string& family_name, int trials,
               const std::vector<std::string>& criteria_names,
               const std::vector<std::string>& map_args, const std::string& format) {
    cmc::CsvSpec spec;
    spec.path = data_path;
    spec.response = response;
    spec.family = cmc::family_from_name(family_name, trials);
    for (const auto& arg : map_args) spec.categorical_map.push_back(parse_map_entry(arg));

    const std::vector<cmc::CriterionSpec> specs = parse_criteria(criteria_names);

    const cmc::LoadedCsv loaded = cmc::load_csv(spec);
    const cmc::PerSizeBests bests = cmc::best_per_size(loaded.dataset);
    const cmc::SelectionReport report = cmc::build_report(bests, specs);
    const cmc::ReportDoc doc = cmc::make_report_doc(report, loaded.predictor_names);

    if (format == "json") {
        std::cout << cmc::to_json(doc).dump(2) << '\n';
    } else {
        std::cout << cmc::render_table(doc);
    }
    return 0;
}

std::string format_rate_pair(const cmc::ErrorRates& rates) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.2f, %.2f)", rates.fir, rates.far);
    return buf;
}

int run_simulate(const std::string& scenario_path,
                 const std::vector<std::string>& criteria_names, int workers,
                 const std::string& out_path, const std::string& format) {
    const std::vector<cmc::CriterionSpec> specs = parse_criteria(criteria_names);
    const std::vector<cmc::Scenario> scenarios = cmc::parse_scenarios_file(scenario_path);
    if (scenarios.empty()) throw cmc::Error("'" + scenario_path + "': no scenarios");

    std::vector<cmc::ScenarioResult> results;
    results.reserve(scenarios.size());
    for (const cmc::Scenario& scn : scenarios) {
        try {
            results.push_back(cmc::run_scenario(scn, specs, workers));
        } catch (const cmc::TooManyPredictors& e) {
            throw cmc::Error("scenario '" + scn.id + "': " + e.what());
        }
    }

    std::string out;
    if (format == "json") {
        nlohmann::ordered_json j;
        j["scenarios"] = nlohmann::ordered_json::array();
        for (const auto& res : results) {
            nlohmann::ordered_json s;
            s["id"] = res.scenario.id;
            s["family"] = res.scenario.family.name();
            s["n"] = res.scenario.n;
            if (res.scenario.family.kind == cmc::FamilyKind::Binomial) {
                s["m"] = res.scenario.family.trials;
            }
            s["p"] = res.scenario.p;
            s["p_star"] = res.scenario.p_star;
            s["replications"] = res.scenario.replications;
            s["seed"] = res.scenario.seed;
            s["criteria"] = nlohmann::ordered_json::object();
            for (std::size_t k = 0; k < res.specs.size(); ++k) {
                nlohmann::ordered_json c;
                c["fir"] = res.mean_rates[k].fir;
                c["far"] = res.mean_rates[k].far;
                c["exact_recovery"] = res.exact_recovery[k];
                s["criteria"][res.specs[k].name()] = std::move(c);
            }
            s["nonconverged_full"] = res.nonconverged_full;
            j["scenarios"].push_back(std::move(s));
        }
        out = j.dump(2);
        out += '\n';
    } else {
        out = "scenario";
        for (const auto& spec : specs) out += '\t' + spec.name();
        out += '\n';
        for (const auto& res : results) {
            out += res.scenario.id;
            for (std::size_t k = 0; k < res.specs.size(); ++k) {
                out += '\t' + format_rate_pair(res.mean_rates[k]);
            }
            out += '\n';
        }
    }

    if (out_path.empty() || out_path == "-") {
        std::cout << out;
    } else {
        std::ofstream f(out_path);
        if (!f) throw cmc::Error("cannot write '" + out_path + "'");
        f << out;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Best-subset regression model selection with AIC, BIC and CMC"};
    app.require_subcommand(1);

    auto* select = app.add_subcommand(
        "select", "Rank all predictor subsets of a CSV dataset and apply criteria");
    std::string data_path, response, family_name = "gaussian", format = "table";
    int trials = 1;
    std::vector<std::string> criteria{"cmc:0.5"};
    std::vector<std::string> map_args;
    select->add_option("--data", data_path, "CSV file with a header row")->required();
    select->add_option("--response", response, "response column name")->required();
    select->add_option("--family", family_name, "gaussian|binomial|poisson")->required();
    select->add_option("--trials", trials, "binomial trial count m (default 1)");
    select->add_option("--criteria", criteria,
                       "criteria: aic, bic, cmc:ALPHA (default cmc:0.5)")
        ->delimiter(',');
    select->add_option("--map", map_args,
                       "categorical encoding COL=LEVEL:VALUE, repeatable");
    select->add_option("--format", format, "table|json (default table)")
        ->check(CLI::IsMember({"table", "json"}));

    auto* simulate = app.add_subcommand(
        "simulate", "Run scenario stanzas and report mean (FIR, FAR) per criterion");
    std::string scenario_path, out_path, sim_format = "tsv";
    int workers = 1;
    std::vector<std::string> sim_criteria{"aic", "bic", "cmc:0.9", "cmc:0.5", "cmc:0.1"};
    simulate->add_option("--scenarios", scenario_path, "scenario stanza file")->required();
    simulate->add_option("--criteria", sim_criteria,
                         "criteria (default aic,bic,cmc:0.9,cmc:0.5,cmc:0.1)")
        ->delimiter(',');
    simulate->add_option("--workers", workers, "worker threads (default 1)");
    simulate->add_option("--out", out_path, "output path (default stdout)");
    simulate->add_option("--format", sim_format, "tsv|json (default tsv)")
        ->check(CLI::IsMember({"tsv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (select->parsed()) {
            return run_select(data_path, response, family_name, trials, criteria,
                              map_args, format);
        }
        return run_simulate(scenario_path, sim_criteria, workers, out_path, sim_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
