#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dsm/report.hpp"
#include "dsm/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitComputation = 2;
constexpr int kExitMismatch = 3;

struct RunOptions {
    std::string path;
    std::optional<std::string> rule;
    std::optional<double> epsilon;
    std::string format = "text";
};

dsm::Scenario load(const RunOptions& opt) {
    auto scenario = dsm::parse_scenario(opt.path);
    if (opt.rule) {
        for (auto& p : scenario.pipelines) {
            if (*opt.rule == "pcr5")
                p.rule = dsm::FusionRule::PCR5;
            else if (*opt.rule == "pcr6")
                p.rule = dsm::FusionRule::PCR6;
            else
                p.rule = dsm::FusionRule::Conjunctive;
        }
    }
    if (opt.epsilon)
        scenario.epsilon = *opt.epsilon;
    return scenario;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evidential fusion scenarios: PCR5/PCR6 combination, discounting, "
                 "probabilistic transforms and decision reports"};
    app.require_subcommand(1);

    RunOptions opt;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and print its decision report");
    run_cmd->add_option("file", opt.path, "scenario file")->required();
    run_cmd->add_option("--rule", opt.rule, "override every pipeline's rule")
        ->check(CLI::IsMember({"pcr5", "pcr6", "conj"}));
    run_cmd->add_option("--epsilon", opt.epsilon, "override the DSmP epsilon");
    run_cmd->add_option("--format", opt.format, "text | json-report")
        ->check(CLI::IsMember({"text", "json-report"}));

    auto* tables_cmd =
        app.add_subcommand("tables", "Compare a scenario's results against its expected block");
    tables_cmd->add_option("file", opt.path, "scenario file")->required();

    auto* validate_cmd =
        app.add_subcommand("validate", "Validate a scenario and print its canonical form");
    validate_cmd->add_option("file", opt.path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) {
            const auto scenario = dsm::parse_scenario(opt.path);
            std::cout << dsm::serialize_scenario(scenario);
            return kExitOk;
        }

        const auto scenario = load(opt);
        const auto compiled = dsm::compile(scenario);

        try {
            const auto report = dsm::run(compiled);
            if (tables_cmd->parsed()) {
                const auto tr = dsm::compare_tables(compiled, report);
                std::cout << dsm::render_table_report(tr);
                return tr.all_pass ? kExitOk : kExitMismatch;
            }
            std::cout << (opt.format == "text" ? dsm::render_text(report)
                                               : dsm::render_json(report));
            return kExitOk;
        } catch (const dsm::ScenarioError&) {
            throw;
        } catch (const dsm::Error& e) {
            std::cerr << "computation error: " << e.what() << "\n";
            return kExitComputation;
        }
    } catch (const dsm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
