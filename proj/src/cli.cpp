#include "jdhedge/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "jdhedge/config.hpp"
#include "jdhedge/series.hpp"
#include "jdhedge/tree.hpp"
#include "jdhedge/validation.hpp"

namespace jdhedge {

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> method;
    std::optional<std::string> policy;
};

void apply_overrides(RunConfig& cfg, const Overrides& over) {
    if (over.seed) cfg.seed = *over.seed;
    if (over.method) {
        if (*over.method == "cmh")
            cfg.method = HedgeMethod::Cmh;
        else if (*over.method == "clh")
            cfg.method = HedgeMethod::Clh;
        else
            throw ConfigError("method must be cmh or clh");
    }
    if (over.policy) {
        if (*over.policy == "long")
            cfg.policy = PositionPolicy::always_long();
        else if (*over.policy == "short")
            cfg.policy = PositionPolicy::always_short();
        else
            throw ConfigError("policy override must be long or short");
    }
    cfg.validate();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

int run_simulate(const RunConfig& cfg, bool with_log) {
    const RebalanceGrid grid = cfg.make_grid();
    const SamplePath path = simulate_path(cfg.model, grid, cfg.refinement, cfg.seed);
    const HedgeConfig hedge = cfg.make_hedge_config();
    const Trajectory traj = run_hedge(cfg.model, path, grid, hedge, cfg.policy);
    write_file(cfg.out_series, series_csv(path, grid, traj, cfg.contract(), cfg.model));
    if (with_log) std::cout << decision_log(traj, path, grid);
    return 0;
}

int run_tree(const RunConfig& cfg) {
    const RebalanceGrid grid = cfg.make_grid();
    const SamplePath path = simulate_path(cfg.model, grid, cfg.refinement, cfg.seed);
    const DecisionTree tree = enumerate_tree(cfg.model, path, grid, cfg.make_hedge_config());
    write_file(cfg.out_tree, export_tree(tree, cfg.tree_format));
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"jump-diffusion hedging under proportional transaction costs"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides over;
    std::uint64_t seed_value = 0;
    std::string method_value;
    std::string policy_value;
    std::string golden_dir;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "run configuration file");
        if (config_required) opt->required();
        sub->add_option("--seed", seed_value, "override the configured seed");
        sub->add_option("--method", method_value, "override the method (cmh|clh)");
        sub->add_option("--policy", policy_value, "override the position policy (long|short)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "simulate a path and write the series CSV");
    add_common(simulate, true);
    CLI::App* hedge =
        app.add_subcommand("hedge", "simulate, hedge, and print the per-step decision log");
    add_common(hedge, true);
    CLI::App* tree = app.add_subcommand("tree", "enumerate the full decision tree");
    add_common(tree, true);
    CLI::App* validate =
        app.add_subcommand("validate", "run the closed-form validation battery");
    add_common(validate, false);
    validate->add_option("--golden-dir", golden_dir,
                         "directory with committed golden files to byte-compare");

    std::vector<const char*> argv;
    argv.push_back("jdhedge");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (simulate->parsed() || hedge->parsed() || tree->parsed()) {
            RunConfig cfg = load_config_file(config_path);
            if (simulate->count("--seed") || hedge->count("--seed") || tree->count("--seed"))
                over.seed = seed_value;
            if (!method_value.empty()) over.method = method_value;
            if (!policy_value.empty()) over.policy = policy_value;
            apply_overrides(cfg, over);
            if (tree->parsed()) return run_tree(cfg);
            return run_simulate(cfg, hedge->parsed());
        }
        // validate: the battery is pinned; a config, when given, is checked
        // for well-formedness so bad files still fail fast with exit 2.
        if (!config_path.empty()) load_config_file(config_path);
        const auto results = run_validation(std::cout, golden_dir);
        return all_passed(results) ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace jdhedge
