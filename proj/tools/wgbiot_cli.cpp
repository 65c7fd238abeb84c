// Batch front-end: convergence studies on the manufactured solution and
// steady-state runs of the heterogeneous-permeability problem.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wgbiot/error.hpp"
#include "wgbiot/study.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
    std::string config_path;
    std::vector<std::pair<std::string, std::optional<std::string>>> values{
        {"out", {}}, {"scenario", {}}, {"k", {}}, {"nu", {}}, {"levels", {}},
        {"r_policy", {}}, {"dt", {}}, {"steps", {}}, {"k0", {}}, {"final_time", {}},
        {"cut_style", {}}, {"seed", {}}, {"samples", {}}};

    std::optional<std::string>& operator[](const std::string& key) {
        for (auto& [k, v] : values)
            if (k == key) return v;
        throw std::logic_error("unknown override " + key);
    }
};

void add_flags(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_path, "flat key = value config file");
    app->add_option("--out", o["out"], "output directory");
    app->add_option("--scenario", o["scenario"], "manufactured | heterogeneous");
    app->add_option("--k", o["k"], "polynomial degree (1..3)");
    app->add_option("--nu", o["nu"], "Poisson ratio");
    app->add_option("--levels", o["levels"], "ascending grid levels, e.g. 3,4,5");
    app->add_option("--r-policy", o["r_policy"], "Theory | FixedPlus1 | FixedPlus2");
    app->add_option("--dt", o["dt"], "time step");
    app->add_option("--steps", o["steps"], "number of time steps");
    app->add_option("--final-time", o["final_time"], "march to this time (overrides --steps)");
    app->add_option("--k0", o["k0"], "conductivity inside the band");
    app->add_option("--cut-style", o["cut_style"], "chevron | stair-l");
    app->add_option("--seed", o["seed"], "seed for randomized checks");
    app->add_option("--samples", o["samples"], "field dump grid points per direction");
}

wgbiot::RunConfig resolve(Overrides& o, wgbiot::RunConfig base) {
    if (!o.config_path.empty()) base = wgbiot::read_config_file(o.config_path, std::move(base));
    for (auto& [key, value] : o.values)
        if (value) wgbiot::set_config_value(base, key, *value);
    base.validate();
    return base;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak Galerkin solver for Biot consolidation on polygonal meshes"};
    app.require_subcommand(1);

    Overrides conv_flags, steady_flags;
    auto* conv = app.add_subcommand("convergence", "spatial convergence study on the manufactured solution");
    add_flags(conv, conv_flags);
    auto* steady = app.add_subcommand("steady", "march the heterogeneous problem and dump sampled fields");
    add_flags(steady, steady_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (conv->parsed()) {
            wgbiot::RunConfig defaults;
            defaults.out_dir = "convergence_out";
            const auto config = resolve(conv_flags, defaults);
            const auto result = wgbiot::run_convergence(config, &std::cerr);
            std::cout << result.table;
        } else {
            wgbiot::RunConfig defaults;
            defaults.scenario = "heterogeneous";
            defaults.k = 2;
            defaults.r_policy = wgbiot::RPolicy::FixedPlus2;
            defaults.levels = {4};
            defaults.dt = 0.05;
            defaults.final_time = 1.0;
            defaults.out_dir = "steady_out";
            const auto config = resolve(steady_flags, defaults);
            const auto result = wgbiot::run_steady(config, &std::cerr);
            std::cout << "t = " << result.final_time << ", steadiness " << result.steadiness << ", "
                      << result.samples.size() << " samples written to " << config.out_dir << "\n";
        }
    } catch (const wgbiot::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const wgbiot::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
