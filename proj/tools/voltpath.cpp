#include "voltpath/commands.h"

#include <CLI11.hpp>

#include <iostream>

using namespace voltpath::report;

int main(int argc, char** argv)
{
    CLI::App app{"Downscale annual transportation energy scenarios into hourly BA charging loads"};
    app.require_subcommand(1);

    CommandOptions options;
    std::string config;
    std::uint64_t seed = 0;
    std::string out;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "flat key = value run configuration")->required();
        cmd->add_option("--seed", seed, "64-bit seed overriding the config");
        cmd->add_option("--out", out, "output directory overriding the config");
        cmd->add_option("--scenario", options.scenarios, "scenario id (repeatable)")->take_all();
        cmd->add_option("--year", options.years, "model year (repeatable)")->take_all();
    };

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const CommandOptions&, std::ostream&, std::ostream&);
    };
    const Command commands[] = {
        {"validate", "check inputs; exit 1 when violations are found", cmd_validate},
        {"metrics", "write metrics.csv", cmd_metrics},
        {"downscale", "write hourly BA load CSVs and manifest.json", cmd_downscale},
        {"compare", "write comparison.csv for the first two scenarios", cmd_compare},
        {"all", "validate, metrics, downscale and compare", cmd_all},
    };
    std::vector<CLI::App*> subs;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        add_common(sub);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitEnvironment;
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!subs[i]->parsed()) {
            continue;
        }
        options.config = config;
        if (subs[i]->count("--seed") > 0) {
            options.seed = seed;
        }
        if (subs[i]->count("--out") > 0) {
            options.out = out;
        }
        return commands[i].run(options, std::cout, std::cerr);
    }
    return kExitEnvironment;
}
