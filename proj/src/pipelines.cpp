#include "ddesindy/pipelines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace ddesindy {

namespace {

std::atomic<std::int64_t> g_sindy_calls{0};

SampleSet training_slice(const SampleSet& samples) {
    Index b = samples.boundary;
    if (b <= 0 || b > samples.rows()) b = samples.rows();
    SampleSet t;
    t.times = samples.times.head(b);
    t.X = samples.X.topRows(b);
    t.dX = samples.dX.topRows(b);
    t.derivative_provenance = samples.derivative_provenance;
    t.boundary = b;
    return t;
}

DelayedBlocks source_blocks(const SampleSet& train, const std::vector<double>& offsets,
                            const BlockProvider& provider) {
    if (provider.mode == BlockSource::dense) {
        if (!provider.dense)
            throw ConfigError("dense block source requires the generating trajectory");
        if (!provider.phi)
            throw ConfigError("dense block source requires a history function");
        return delayed_blocks_dense(train.times, offsets, *provider.dense, provider.phi);
    }
    return delayed_blocks(train, offsets);
}

struct FitCore {
    FeatureMatrix features;
    SparseCoefficients coefficients;
    double residual = 0.0;
    std::vector<Index> rows;
    Vec row_times;
    Mat X_retained;
};

FitCore fit_core(const SampleSet& train, const std::vector<double>& offsets,
                 const LibrarySpec& spec, const StlsqConfig& stlsq_config,
                 const BlockProvider& provider, const std::vector<std::string>& suffixes) {
    DelayedBlocks db = source_blocks(train, offsets, provider);
    const Index mret = static_cast<Index>(db.rows.size());
    const Index n = train.dim();

    FitCore core;
    core.rows = db.rows;
    core.row_times.resize(mret);
    core.X_retained.resize(mret, n);
    Mat dX(mret, n);
    for (Index r = 0; r < mret; ++r) {
        core.row_times[r] = train.times[db.rows[static_cast<std::size_t>(r)]];
        core.X_retained.row(r) = train.X.row(db.rows[static_cast<std::size_t>(r)]);
        dX.row(r) = train.dX.row(db.rows[static_cast<std::size_t>(r)]);
    }

    std::vector<Mat> blocks;
    blocks.push_back(core.X_retained);
    for (auto& b : db.blocks) blocks.push_back(std::move(b));

    core.features = build_library(blocks, spec, suffixes);
    core.coefficients = stlsq(core.features, dX, stlsq_config);
    core.residual = residual_norm(core.features.theta, core.coefficients.xi, dX);
    return core;
}

void install_core(FitResult& fit, FitCore&& core) {
    fit.coefficients = std::move(core.coefficients);
    fit.residual_term = core.residual;
    fit.objective = core.residual;
    fit.rows = std::move(core.rows);
    fit.row_times = std::move(core.row_times);
}

void finish_objective(FitResult& fit, const Mat& X_retained, const DenseSolution& sol,
                      bool head_only) {
    const Index n = X_retained.cols();
    Mat traj(fit.row_times.size(), n);
    Vec state;
    for (Index r = 0; r < fit.row_times.size(); ++r) {
        sol.eval_into(fit.row_times[r], state);
        if (head_only)
            traj.row(r) = state.head(n).transpose();
        else
            traj.row(r) = state.transpose();
    }
    fit.fit_trajectory = traj;
    fit.sim_term = (X_retained - traj).norm();
    fit.objective = fit.weights.w1 * fit.residual_term + fit.weights.w2 * fit.sim_term;
}

void mark_blowup(FitResult& fit) {
    fit.blowup = true;
    fit.sim_term = kBlowupSentinel;
    fit.objective = kBlowupSentinel;
    fit.fit_trajectory.resize(0, 0);
}

}  // namespace

std::vector<std::string> esindy_suffixes(std::size_t delay_count) {
    std::vector<std::string> s{""};
    if (delay_count == 1) {
        s.emplace_back("(t-tau)");
    } else {
        for (std::size_t i = 1; i <= delay_count; ++i)
            s.push_back("(t-tau" + std::to_string(i) + ")");
    }
    return s;
}

std::vector<std::string> psindy_suffixes(int M) {
    std::vector<std::string> s{""};
    for (int i = 1; i <= M; ++i) s.push_back("(t+eta" + std::to_string(i) + ")");
    return s;
}

FitResult esindy_fit(const SampleSet& samples, const std::vector<double>& delays,
                     const LibrarySpec& spec, const StlsqConfig& stlsq_config,
                     const BlockProvider& blocks) {
    if (delays.empty()) throw ConfigError("at least one candidate delay required");
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (delays[i] <= 0) throw ConfigError("candidate delays must be positive");
        if (i > 0 && delays[i] <= delays[i - 1])
            throw ConfigError("candidate delays must be strictly ascending");
    }
    SampleSet train = training_slice(samples);
    std::vector<double> offsets;
    for (double d : delays) offsets.push_back(-d);

    FitResult fit;
    fit.method = Method::esindy;
    fit.library = spec;
    fit.delays = delays;
    fit.n = static_cast<int>(samples.dim());
    install_core(fit, fit_core(train, offsets, spec, stlsq_config, blocks,
                               esindy_suffixes(delays.size())));
    return fit;
}

FitResult psindy_fit(const SampleSet& samples, double tau_bar, int M, const LibrarySpec& spec,
                     const StlsqConfig& stlsq_config, const BlockProvider& blocks) {
    CollocationScheme scheme = make_scheme(M, tau_bar, static_cast<int>(samples.dim()));
    SampleSet train = training_slice(samples);

    FitResult fit;
    fit.method = Method::psindy;
    fit.library = spec;
    fit.tau_bar = tau_bar;
    fit.M = M;
    fit.n = static_cast<int>(samples.dim());
    install_core(fit, fit_core(train, collocation_offsets(scheme), spec, stlsq_config, blocks,
                               psindy_suffixes(M)));
    return fit;
}

DdeRhs reconstructed_dde_rhs(const FitResult& fit) {
    if (fit.method != Method::esindy)
        throw std::invalid_argument("reconstructed_dde_rhs expects an E-SINDy fit");
    auto plan = std::make_shared<LibraryPlan>(fit.library, fit.n,
                                              static_cast<int>(fit.delays.size()) + 1);
    Mat xi_t = fit.coefficients.xi.transpose();
    const int n = fit.n;
    return [plan, xi_t, n, vars = std::vector<double>(static_cast<std::size_t>(plan->variables())),
            row = Vec(plan->columns())](double, const Vec& x,
                                        const std::vector<Vec>& delayed) mutable -> Vec {
        for (int c = 0; c < n; ++c) vars[static_cast<std::size_t>(c)] = x[c];
        for (std::size_t b = 0; b < delayed.size(); ++b)
            for (int c = 0; c < n; ++c)
                vars[(b + 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] =
                    delayed[b][c];
        plan->eval(vars.data(), row.data());
        return xi_t * row;
    };
}

OdeRhs reconstructed_field(const FitResult& fit) {
    if (fit.method != Method::psindy)
        throw std::invalid_argument("reconstructed_field expects a P-SINDy fit");
    CollocationScheme scheme = make_scheme(fit.M, fit.tau_bar, fit.n);
    auto plan = std::make_shared<LibraryPlan>(fit.library, fit.n, fit.M + 1);
    Mat xi_t = fit.coefficients.xi.transpose();
    const int n = fit.n;
    Block0Rhs block0 = [plan, xi_t, n,
                        vars = std::vector<double>(static_cast<std::size_t>(plan->variables())),
                        row = Vec(plan->columns())](const std::vector<Vec>& vals) mutable -> Vec {
        for (std::size_t b = 0; b < vals.size(); ++b)
            for (int c = 0; c < n; ++c)
                vars[b * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] = vals[b][c];
        plan->eval(vars.data(), row.data());
        return xi_t * row;
    };
    return assemble_field(scheme, block0);
}

Vec collocated_initial_state(const CollocationScheme& scheme, const History& history) {
    Vec u0(static_cast<Index>(scheme.n) * (scheme.M + 1));
    for (int i = 0; i <= scheme.M; ++i)
        u0.segment(i * scheme.n, scheme.n) = history(scheme.nodes[i]);
    return u0;
}

FitResult esindy_objective(const SampleSet& samples, const std::vector<double>& delays,
                           const LibrarySpec& spec, const StlsqConfig& stlsq_config,
                           const ErrorWeights& weights, const HistoryProvider& history,
                           const BlockProvider& blocks, const SimOptions& sim) {
    if (weights.w1 + weights.w2 <= 0) throw ConfigError("weights must not both vanish");
    ++g_sindy_calls;
    FitResult fit = esindy_fit(samples, delays, spec, stlsq_config, blocks);
    fit.weights = weights;

    SampleSet train = training_slice(samples);
    Mat X_ret(fit.row_times.size(), train.dim());
    for (Index r = 0; r < fit.row_times.size(); ++r)
        X_ret.row(r) = train.X.row(fit.rows[static_cast<std::size_t>(r)]);

    DdeProblem problem;
    problem.rhs = reconstructed_dde_rhs(fit);
    problem.delays = delays;
    problem.history = history.fn;
    problem.t_span = {train.times[0], train.times[train.rows() - 1]};
    problem.rel_tol = sim.rel_tol;
    problem.abs_tol = sim.abs_tol;
    problem.max_steps = sim.max_steps;
    problem.diverge_bound = sim.diverge_bound;
    try {
        DenseSolution sol = solve_dde(problem);
        finish_objective(fit, X_ret, sol, false);
    } catch (const IntegrationError&) {
        mark_blowup(fit);
    }
    return fit;
}

FitResult psindy_objective(const SampleSet& samples, double tau_bar, int M,
                           const LibrarySpec& spec, const StlsqConfig& stlsq_config,
                           const ErrorWeights& weights, const HistoryProvider& history,
                           const BlockProvider& blocks, const SimOptions& sim) {
    if (weights.w1 + weights.w2 <= 0) throw ConfigError("weights must not both vanish");
    ++g_sindy_calls;
    FitResult fit = psindy_fit(samples, tau_bar, M, spec, stlsq_config, blocks);
    fit.weights = weights;

    SampleSet train = training_slice(samples);
    Mat X_ret(fit.row_times.size(), train.dim());
    for (Index r = 0; r < fit.row_times.size(); ++r)
        X_ret.row(r) = train.X.row(fit.rows[static_cast<std::size_t>(r)]);

    CollocationScheme scheme = make_scheme(M, tau_bar, fit.n);
    OdeProblem problem;
    problem.rhs = reconstructed_field(fit);
    problem.initial_state = collocated_initial_state(scheme, history.fn);
    problem.t_span = {train.times[0], train.times[train.rows() - 1]};
    problem.rel_tol = sim.rel_tol;
    problem.abs_tol = sim.abs_tol;
    problem.max_steps = sim.max_steps;
    problem.diverge_bound = sim.diverge_bound;
    try {
        DenseSolution sol = solve_ode(problem);
        finish_objective(fit, X_ret, sol, true);
    } catch (const IntegrationError&) {
        mark_blowup(fit);
    }
    return fit;
}

ValidationReport validate(const FitResult& fit, const SampleSet& samples,
                          const HistoryProvider& history, const SimOptions& sim) {
    const Index m = samples.rows();
    const Index n = samples.dim();
    ValidationReport report;
    report.times = samples.times;
    report.trajectory = Mat::Constant(m, n, std::numeric_limits<double>::quiet_NaN());

    try {
        if (fit.method == Method::esindy) {
            DdeProblem problem;
            problem.rhs = reconstructed_dde_rhs(fit);
            problem.delays = fit.delays;
            problem.history = history.fn;
            problem.t_span = {samples.times[0], samples.times[m - 1]};
            problem.rel_tol = sim.rel_tol;
            problem.abs_tol = sim.abs_tol;
            problem.max_steps = sim.max_steps;
            problem.diverge_bound = sim.diverge_bound;
            DenseSolution sol = solve_dde(problem);
            for (Index i = 0; i < m; ++i) report.trajectory.row(i) = sol(samples.times[i]).transpose();
        } else {
            CollocationScheme scheme = make_scheme(fit.M, fit.tau_bar, fit.n);
            OdeProblem problem;
            problem.rhs = reconstructed_field(fit);
            problem.initial_state = collocated_initial_state(scheme, history.fn);
            problem.t_span = {samples.times[0], samples.times[m - 1]};
            problem.rel_tol = sim.rel_tol;
            problem.abs_tol = sim.abs_tol;
            problem.max_steps = sim.max_steps;
            problem.diverge_bound = sim.diverge_bound;
            DenseSolution sol = solve_ode(problem);
            Vec state;
            for (Index i = 0; i < m; ++i) {
                sol.eval_into(samples.times[i], state);
                report.trajectory.row(i) = state.head(n).transpose();
            }
        }
    } catch (const IntegrationError&) {
        report.blowup = true;
        report.train_sup = report.train_frobenius = kBlowupSentinel;
        report.validation_sup = report.validation_frobenius = kBlowupSentinel;
        return report;
    }

    Index b = samples.boundary;
    if (b <= 0 || b > m) b = m;
    Mat diff = samples.X - report.trajectory;
    auto seg = [&](Index lo, Index hi, double& sup, double& frob) {
        if (hi <= lo) {
            sup = frob = 0.0;
            return;
        }
        Mat d = diff.middleRows(lo, hi - lo);
        sup = d.cwiseAbs().maxCoeff();
        frob = d.norm();
    };
    seg(0, b, report.train_sup, report.train_frobenius);
    seg(b, m, report.validation_sup, report.validation_frobenius);
    return report;
}

std::int64_t sindy_calls() { return g_sindy_calls.load(); }
void reset_sindy_calls() { g_sindy_calls.store(0); }

}  // namespace ddesindy
