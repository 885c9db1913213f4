#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "specmux/run.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Spectrally multiplexed HOM interference and key-rate simulator"};
    app.set_version_flag("--version", specmux::kVersion);
    app.require_subcommand(1, 1);

    specmux::RunOptions options;
    std::string config;
    std::string preset;
    bool probabilities = false;

    app.add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--preset", preset, "base preset (current, soa_coupling, soa_coupling_dense, matched_mode, ideal)");
    app.add_option("--seed", options.seed, "master RNG seed")->capture_default_str();
    app.add_option("--out", options.out_dir, "output directory")->capture_default_str();
    auto* counts = app.add_flag("--counts", options.counts, "report coincidence counts");
    app.add_flag("--probabilities", probabilities, "report coincidence probabilities (default)")->excludes(counts);
    app.add_flag("--poisson", options.poisson, "Poisson-sample the counts")->needs(counts);

    std::map<std::string, std::string> const descriptions{
        {"freq-response", "SSMM channel transmission against frequency"},
        {"hom-dip", "coincidences against relative delay, with Gaussian dip fits"},
        {"keyrate-sweep", "MDI-QKD key rate and enhancement against mode count"},
        {"phase-scan", "dip visibility against the relative qubit phase"},
        {"repeater-rate", "relay and repeater rates against mode count"},
        {"tbp-sweep", "repeater rate against pulse duration at fixed bandwidth"},
        {"validate-oracle", "cross-check the engine against independent oracles"},
    };
    for (const auto& name : specmux::subcommand_names()) {
        auto const found = descriptions.find(name);
        app.add_subcommand(name, found == descriptions.end() ? std::string{} : found->second)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? specmux::kExitOk : specmux::kExitConfigError;
    }

    options.subcommand = app.get_subcommands().front()->get_name();
    if (!config.empty()) {
        options.config_path = config;
    }
    if (!preset.empty()) {
        options.preset = preset;
    }
    return specmux::run(options, std::cout, std::cerr);
}
