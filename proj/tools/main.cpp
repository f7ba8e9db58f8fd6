#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ddesindy/experiment.hpp"
#include "ddesindy/models.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ddesindy::ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_run(const std::string& config_path) {
    ddesindy::ExperimentReport report =
        ddesindy::run_experiment(ddesindy::load_config(config_path));
    std::cout << ddesindy::format_report(report);
    std::cout << "outputs written to " << report.config.output_dir << "\n";
    return 0;
}

int cmd_grid(const std::string& config_path) {
    ddesindy::ExperimentConfig config = ddesindy::load_config(config_path);
    config.optimizer = "bf";
    ddesindy::ExperimentReport report = ddesindy::run_experiment(config);
    std::cout << "grid of " << report.optimization.grid_values.size() << " points, best ";
    for (int j = 0; j < config.space.dim(); ++j)
        std::cout << config.space.labels[static_cast<std::size_t>(j)] << "="
                  << report.optimization.best[j] << " ";
    std::cout << "objective=" << report.optimization.best_objective << "\n";
    std::cout << "outputs written to " << report.config.output_dir << "\n";
    return 0;
}

int cmd_suite(const std::string& config_path) {
    std::string output_dir = ".";
    auto configs = ddesindy::parse_suite(slurp(config_path), output_dir);
    auto outcomes = ddesindy::run_suite(configs, output_dir);
    int failures = 0;
    for (const auto& o : outcomes) {
        std::cout << o.name << ": " << (o.ok ? "ok" : "FAILED") << " ";
        if (o.ok)
            std::cout << o.recovered << " (calls " << o.calls << ")";
        else
            std::cout << o.message;
        std::cout << "\n";
        if (!o.ok) ++failures;
    }
    std::cout << "tables written to " << output_dir << "\n";
    return failures == 0 ? 0 : 1;
}

int cmd_list_models() {
    for (const auto& model : ddesindy::builtin_models()) {
        std::cout << model.name << ": n=" << model.n << ", delays=[";
        for (std::size_t i = 0; i < model.delays.size(); ++i)
            std::cout << (i ? ", " : "") << model.delays[i];
        std::cout << "]";
        if (!model.params.empty()) {
            std::cout << ", params {";
            bool first = true;
            for (const auto& [key, value] : model.params) {
                std::cout << (first ? "" : ", ") << key << "=" << value;
                first = false;
            }
            std::cout << "}";
        }
        std::cout << "\n";
    }
    std::cout << "\npresets:\n";
    for (const auto& key : ddesindy::benchmark_keys()) std::cout << "  " << key << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Identification of delay differential equations from trajectory samples"};
    app.require_subcommand(1);

    std::string run_config, suite_config, grid_config;
    CLI::App* run = app.add_subcommand("run", "Run one experiment from a config file");
    run->add_option("--config", run_config, "JSON experiment config")->required();
    CLI::App* suite = app.add_subcommand("suite", "Run a suite of experiments");
    suite->add_option("--config", suite_config, "JSON suite config")->required();
    CLI::App* grid = app.add_subcommand("grid", "Brute-force error-curve dump");
    grid->add_option("--config", grid_config, "JSON experiment config")->required();
    CLI::App* list = app.add_subcommand("list-models", "List built-in models and presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_config);
        if (suite->parsed()) return cmd_suite(suite_config);
        if (grid->parsed()) return cmd_grid(grid_config);
        if (list->parsed()) return cmd_list_models();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
