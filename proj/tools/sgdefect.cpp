// sgdefect: batch verification driver.
//   sgdefect run --config scenario.json --out reports/ --format csv --jobs 4
//   sgdefect list-suites

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "sgdefect/cli/driver.hpp"

int main(int argc, char** argv) {
    namespace cli = sgdefect::cli;
    CLI::App app{"Verification suites for the sine-Gordon model with an integrable defect"};
    app.require_subcommand(1);

    std::string config, out = "reports";
    cli::Format format = cli::Format::csv;
    unsigned jobs = 1;
    auto* run = app.add_subcommand("run", "run the suites of a scenario config");
    run->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "report directory");
    run->add_option("--format", format, "csv or json")
        ->transform(CLI::CheckedTransformer(std::map<std::string, cli::Format>{{"csv", cli::Format::csv},
                                                                              {"json", cli::Format::json}}));
    run->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));

    app.add_subcommand("list-suites", "print the suite catalogue");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::exit_usage;
    }

    if (app.got_subcommand("list-suites")) {
        cli::list_suites(std::cout);
        return cli::exit_pass;
    }
    try {
        return cli::run(cli::load_config(config), out, format, jobs, std::cout);
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::exit_usage;
    }
}
