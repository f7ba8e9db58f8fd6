#include "ddesindy/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddesindy/rng.hpp"

namespace ddesindy {

namespace {

void validate_space(const SearchSpace& space) {
    if (space.bounds.empty()) throw ConfigError("search space must have at least one dimension");
    for (const auto& [lo, hi] : space.bounds)
        if (!(lo < hi)) throw ConfigError("search bounds must satisfy lo < hi");
    if (!space.labels.empty() && space.labels.size() != space.bounds.size())
        throw ConfigError("one label per dimension required");
}

}  // namespace

OptimizationResult brute_force(const Objective& objective, const SearchSpace& space,
                               const std::vector<int>& counts) {
    validate_space(space);
    const int d = space.dim();
    if (static_cast<int>(counts.size()) != d)
        throw ConfigError("one grid count per dimension required");
    std::int64_t total = 1;
    for (int c : counts) {
        if (c < 2) throw ConfigError("grid counts must be at least 2");
        total *= c;
    }

    OptimizationResult result;
    result.grid_points.resize(total, d);
    result.grid_values.resize(total);
    result.best_objective = std::numeric_limits<double>::infinity();

    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    Vec point(d);
    for (std::int64_t k = 0; k < total; ++k) {
        for (int j = 0; j < d; ++j) {
            auto [lo, hi] = space.bounds[static_cast<std::size_t>(j)];
            point[j] = lo + (hi - lo) * idx[static_cast<std::size_t>(j)] /
                                (counts[static_cast<std::size_t>(j)] - 1);
        }
        double f = objective(point);
        result.grid_points.row(k) = point.transpose();
        result.grid_values[k] = f;
        ++result.evaluations;
        if (f < result.best_objective) {
            result.best_objective = f;
            result.best = point;
            result.trace.push_back({result.evaluations, f});
        }
        // Odometer, last dimension fastest.
        for (int j = d - 1; j >= 0; --j) {
            if (++idx[static_cast<std::size_t>(j)] < counts[static_cast<std::size_t>(j)]) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
    }
    if (result.trace.empty() || result.trace.back().evaluations != total)
        result.trace.push_back({total, result.best_objective});
    result.reason = "grid exhausted";
    result.iterations = static_cast<int>(total);
    return result;
}

OptimizationResult particle_swarm(const Objective& objective, const SearchSpace& space,
                                  const PsoConfig& config) {
    validate_space(space);
    if (config.stall_tol <= 0) throw ConfigError("stall tolerance must be positive");
    if (config.stall_window < 1) throw ConfigError("stall window must be at least 1");
    if (config.max_iterations < 1) throw ConfigError("max iterations must be at least 1");
    const int d = space.dim();
    const int S = config.swarm_size > 0 ? config.swarm_size : std::min(20 * d, 40);
    if (S < 2) throw ConfigError("swarm size must be at least 2");

    Rng rng(config.seed);
    std::vector<Vec> x(static_cast<std::size_t>(S), Vec(d));
    std::vector<Vec> v(static_cast<std::size_t>(S), Vec(d));
    for (auto& p : x)
        for (int j = 0; j < d; ++j) {
            auto [lo, hi] = space.bounds[static_cast<std::size_t>(j)];
            p[j] = rng.uniform(lo, hi);
        }
    for (auto& p : v)
        for (int j = 0; j < d; ++j) {
            double range = space.bounds[static_cast<std::size_t>(j)].second -
                           space.bounds[static_cast<std::size_t>(j)].first;
            p[j] = rng.uniform(-0.25 * range, 0.25 * range);
        }

    OptimizationResult result;
    std::vector<Vec> pbest = x;
    std::vector<double> pf(static_cast<std::size_t>(S));
    for (int i = 0; i < S; ++i) {
        pf[static_cast<std::size_t>(i)] = objective(x[static_cast<std::size_t>(i)]);
        ++result.evaluations;
    }
    int gbest = 0;
    for (int i = 1; i < S; ++i)
        if (pf[static_cast<std::size_t>(i)] < pf[static_cast<std::size_t>(gbest)]) gbest = i;
    double gf = pf[static_cast<std::size_t>(gbest)];
    result.trace.push_back({result.evaluations, gf});

    // MATLAB-style adaptive inertia: doubles after streaks of improvement,
    // halves after streaks without one, clamped to [0.1, 1.1].
    double inertia = 0.9;
    int inertia_counter = 0;
    int stall = 0;
    result.reason = "max iterations";

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        result.iterations = iter;
        for (int i = 0; i < S; ++i) {
            auto& xi = x[static_cast<std::size_t>(i)];
            auto& vi = v[static_cast<std::size_t>(i)];
            const Vec& pb = pbest[static_cast<std::size_t>(i)];
            const Vec& gb = pbest[static_cast<std::size_t>(gbest)];
            for (int j = 0; j < d; ++j) {
                auto [lo, hi] = space.bounds[static_cast<std::size_t>(j)];
                double range = hi - lo;
                double r1 = rng.uniform();
                double r2 = rng.uniform();
                double vel = inertia * vi[j] + config.cognitive * r1 * (pb[j] - xi[j]) +
                             config.social * r2 * (gb[j] - xi[j]);
                vel = std::clamp(vel, -range, range);
                double pos = xi[j] + vel;
                for (int refl = 0; refl < 10 && (pos < lo || pos > hi); ++refl) {
                    if (pos < lo)
                        pos = 2 * lo - pos;
                    else
                        pos = 2 * hi - pos;
                    vel = -vel;
                }
                xi[j] = std::clamp(pos, lo, hi);
                vi[j] = vel;
            }
            double f = objective(xi);
            ++result.evaluations;
            if (f < pf[static_cast<std::size_t>(i)]) {
                pf[static_cast<std::size_t>(i)] = f;
                pbest[static_cast<std::size_t>(i)] = xi;
            }
        }
        for (int i = 0; i < S; ++i)
            if (pf[static_cast<std::size_t>(i)] < pf[static_cast<std::size_t>(gbest)]) gbest = i;
        double gf_new = pf[static_cast<std::size_t>(gbest)];

        bool improved = (gf - gf_new) >= config.stall_tol * std::max(std::abs(gf), 1.0);
        if (improved) {
            stall = 0;
            inertia_counter = std::max(0, inertia_counter - 1);
        } else {
            ++stall;
            ++inertia_counter;
        }
        if (inertia_counter < 2)
            inertia = std::min(2.0 * inertia, 1.1);
        else if (inertia_counter > 5)
            inertia = std::max(0.5 * inertia, 0.1);

        gf = gf_new;
        result.trace.push_back({result.evaluations, gf});
        if (stall >= config.stall_window) {
            result.reason = "stall";
            break;
        }
    }

    result.best = pbest[static_cast<std::size_t>(gbest)];
    result.best_objective = gf;
    return result;
}

}  // namespace ddesindy
