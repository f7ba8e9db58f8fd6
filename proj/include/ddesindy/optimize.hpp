#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ddesindy/types.hpp"

namespace ddesindy {

struct SearchSpace {
    std::vector<std::pair<double, double>> bounds;
    std::vector<std::string> labels;

    int dim() const { return static_cast<int>(bounds.size()); }
};

struct PsoConfig {
    int swarm_size = 0;  // 0 selects min(20 * dim, 40)
    double cognitive = 1.49;
    double social = 1.49;
    double stall_tol = 1e-3;
    int stall_window = 20;
    int max_iterations = 100;
    std::uint64_t seed = 0;
};

struct TracePoint {
    std::int64_t evaluations;
    double best_objective;
};

struct OptimizationResult {
    Vec best;
    double best_objective = 0.0;
    std::int64_t evaluations = 0;
    std::vector<TracePoint> trace;
    std::string reason;
    int iterations = 0;
    Mat grid_points;  // brute force only: one row per grid point
    Vec grid_values;
};

using Objective = std::function<double(const Vec&)>;

OptimizationResult brute_force(const Objective& objective, const SearchSpace& space,
                               const std::vector<int>& counts);

OptimizationResult particle_swarm(const Objective& objective, const SearchSpace& space,
                                  const PsoConfig& config);

}  // namespace ddesindy
