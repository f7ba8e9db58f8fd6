#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ddesindy/optimize.hpp"
#include "ddesindy/pipelines.hpp"

namespace ddesindy {

// One benchmark run: model x method x external optimizer, per the cli module
// contract. Every field has a default so echoed configs are self-contained.
struct ExperimentConfig {
    std::string name;  // used for suite subdirectories; derived when empty
    std::string model = "logistic";
    std::string method = "esindy";  // esindy | psindy
    int M = 10;                     // psindy collocation degree
    std::string optimizer = "pso";  // bf | pso
    std::vector<int> bf_counts;     // empty: 1000 for 1-D, 100 per dim otherwise
    PsoConfig pso;
    SearchSpace space;
    LibrarySpec library;
    StlsqConfig stlsq;
    SamplingConfig sampling;
    ErrorWeights weights;
    double horizon = 30.0;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    BlockSource block_source = BlockSource::dense;
    std::string history = "model";  // model | constant
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string echo_config(const ExperimentConfig& config);

// All problems are validated before any computation; the message lists every
// defect at once.
std::vector<std::string> validate_config(const ExperimentConfig& config);

ExperimentConfig benchmark_config(const std::string& key);
std::vector<std::string> benchmark_keys();

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<std::pair<std::string, double>> recovered;  // label -> value
    FitResult fit;  // refit at the optimizer's best point
    ValidationReport validation;
    OptimizationResult optimization;
    std::int64_t calls = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> output_files;
};

ExperimentReport run_experiment(const ExperimentConfig& config);
std::string format_report(const ExperimentReport& report);

struct SuiteOutcome {
    std::string name;
    bool ok = false;
    std::string message;
    std::int64_t calls = 0;
    double wall_seconds = 0.0;
    double objective = 0.0;
    std::string recovered;
};

// Individual failures are recorded and the suite continues; comparison CSVs
// land in output_dir.
std::vector<SuiteOutcome> run_suite(const std::vector<ExperimentConfig>& configs,
                                    const std::string& output_dir);

std::vector<ExperimentConfig> parse_suite(const std::string& json_text, std::string& output_dir);

}  // namespace ddesindy
