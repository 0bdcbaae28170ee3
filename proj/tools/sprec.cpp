#include <iostream>

#include <CLI11.hpp>

#include "sprec/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectrally precoded OFDM simulator"};
    app.require_subcommand(0, 1);
    bool list = false;
    app.add_flag("--list-scenarios", list, "List bundled scenarios and exit");

    sprec::RunOptions opt;
    std::uint64_t seed = 0;
    std::string out;
    bool no_plot = false;
    const std::pair<const char*, const char*> commands[] = {
        {"psd", "Power spectral density per variant (freq_hz,psd_dbr)"},
        {"ber", "Coded link BER per variant (snr_db,ber,bits,errors,scenario_id,seed)"},
        {"papr", "PAPR CCDF per variant (threshold_db,ccdf)"},
        {"precoder-info", "Print precoder dimensions and conditioning"},
        {"filter", "Print filter taps or sections"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", opt.scenario, "Bundled scenario name or path")->required();
        sub->add_option("--seed", seed, "Override the scenario seed");
        sub->add_option("--out", out, "Output directory");
        sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--no-plot", no_plot, "Skip the plot script");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? sprec::kExitOk : sprec::kExitScenario;
    }
    if (list) {
        sprec::list_scenarios(std::cout);
        return sprec::kExitOk;
    }
    const auto chosen = app.get_subcommands();
    if (chosen.empty()) {
        std::cerr << app.help();
        return sprec::kExitScenario;
    }
    auto* sub = chosen.front();
    opt.command = sub->get_name();
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--out")) opt.out = out;
    opt.plot = !no_plot;
    return sprec::run_command(opt, std::cout, std::cerr);
}
