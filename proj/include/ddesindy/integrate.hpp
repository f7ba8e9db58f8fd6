#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ddesindy/types.hpp"

namespace ddesindy {

using OdeRhs = std::function<Vec(double, const Vec&)>;
using DdeRhs = std::function<Vec(double, const Vec&, const std::vector<Vec>&)>;
using History = std::function<Vec(double)>;

struct OdeProblem {
    OdeRhs rhs;
    Vec initial_state;
    std::pair<double, double> t_span;
    double rel_tol = 1e-6;
    double abs_tol = 1e-8;
    std::int64_t max_steps = 500000;
    double diverge_bound = 1e8;
};

struct DdeProblem {
    DdeRhs rhs;
    std::vector<double> delays;  // sorted ascending, all positive
    History history;             // defined on [-max delay, 0]
    std::pair<double, double> t_span;
    double rel_tol = 1e-6;
    double abs_tol = 1e-8;
    std::int64_t max_steps = 500000;
    double diverge_bound = 1e8;
    int breakpoint_order = 3;
};

// Piecewise quartic continuous extension of an adaptive Dormand-Prince run.
// Evaluation is exact at accepted step endpoints and C1 across steps.
class DenseSolution {
public:
    double t_begin() const { return ts_.front(); }
    double t_end() const { return ts_.back(); }
    const std::vector<double>& step_times() const { return ts_; }
    const std::vector<Vec>& step_states() const { return states_; }

    Vec operator()(double t) const;
    void eval_into(double t, Vec& out) const;

private:
    friend class Dopri5Driver;
    std::vector<double> ts_;      // accepted step boundaries, size N+1
    std::vector<Vec> states_;     // states at ts_
    std::vector<std::array<Vec, 5>> rcont_;  // per-step interpolant data
};

DenseSolution solve_ode(const OdeProblem& problem);
DenseSolution solve_dde(const DdeProblem& problem);

}  // namespace ddesindy
