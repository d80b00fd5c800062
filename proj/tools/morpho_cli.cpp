#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "morpho/io/config.hpp"
#include "morpho/io/experiments.hpp"

namespace {

struct Overrides {
    std::string config;
    std::string profile;
    std::optional<int> bins;
    std::optional<int> grid_n;
    std::optional<int> budget;
    std::optional<int> seeds;
    std::optional<int> workers;
    std::string out;
    bool store_success = false;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "YAML experiment configuration")->check(CLI::ExistingFile);
    cmd->add_option("--profile", o.profile, "simulation profile")->check(CLI::IsMember({"desk", "full"}));
    cmd->add_option("--bins", o.bins, "sensor positions per coordinate");
    cmd->add_option("--grid-n", o.grid_n, "weight values per axis (odd)");
    cmd->add_option("--budget", o.budget, "evaluations per optimisation run (train and coopt)");
    cmd->add_option("--seeds", o.seeds, "repetitions per design/method, per co-optimisation mode, or per combinator");
    cmd->add_option("--workers", o.workers, "worker threads (default: MORPHO_WORKERS, then all cores)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_flag("--store-success-matrices", o.store_success, "also write per-environment success matrices");
}

morpho::ExperimentConfig resolve(const std::string& command, const Overrides& o) {
    morpho::ExperimentConfig c = o.config.empty() ? morpho::ExperimentConfig{} : morpho::load_config(o.config);
    if (!o.profile.empty()) morpho::apply_profile(c, o.profile);
    if (o.bins) c.landscape.bins = *o.bins;
    if (o.grid_n) c.landscape.grid_n = *o.grid_n;
    if (o.budget) {
        c.train.budget = *o.budget;
        c.coopt.budget = *o.budget;
    }
    if (o.seeds) {
        if (command == "coopt") c.coopt.seeds = *o.seeds;
        else if (command == "hillclimb") c.hillclimb.seeds = *o.seeds;
        else c.train.seeds = *o.seeds;
    }
    if (o.workers) c.workers = *o.workers;
    if (!o.out.empty()) c.out = o.out;
    if (o.store_success) c.landscape.store_success_matrices = true;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"morpho: sensor placement, loss landscapes and sample efficiency for a phototaxis robot"};
    app.set_version_flag("--version", std::string(morpho::experiments::tool_version()));
    app.require_subcommand(1);

    const std::map<std::string, std::pair<std::string, std::function<void(const morpho::ExperimentConfig&)>>> commands = {
        {"sweep", {"landscape over the design and weight grids", morpho::experiments::sweep}},
        {"train", {"derivative-free training on sampled designs", morpho::experiments::train}},
        {"coopt", {"co-optimisation against the fixed-design baseline", morpho::experiments::coopt}},
        {"dtw", {"homeostasis scores for the configured genomes", morpho::experiments::dtw}},
        {"stats", {"correlation reports from existing tables", morpho::experiments::stats}},
        {"hillclimb", {"parallel hill climbers with lineage logs", morpho::experiments::hillclimb}},
        {"report", {"summary tables and plot-ready series", morpho::experiments::report}},
    };

    Overrides overrides;
    std::string chosen;
    for (const auto& [name, entry] : commands) {
        auto* cmd = app.add_subcommand(name, entry.first);
        add_common_flags(cmd, overrides);
        cmd->callback([&chosen, name = name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code != 0) std::fputs(app.help().c_str(), stderr);
        return code;
    }

    try {
        const auto config = resolve(chosen, overrides);
        commands.at(chosen).second(config);
    } catch (const morpho::ConfigError& e) {
        std::fprintf(stderr, "morpho %s: invalid configuration: %s\n", chosen.c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "morpho %s: %s\n", chosen.c_str(), e.what());
        return 1;
    }
    return 0;
}
