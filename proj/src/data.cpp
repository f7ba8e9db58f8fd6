#include "ddesindy/data.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "ddesindy/rng.hpp"

namespace ddesindy {

namespace {

// Derivative weights of the quadratic through (ta, tb, tc), evaluated at q.
std::array<double, 3> three_point_weights(double ta, double tb, double tc, double q) {
    return {(2 * q - tb - tc) / ((ta - tb) * (ta - tc)),
            (2 * q - ta - tc) / ((tb - ta) * (tb - tc)),
            (2 * q - ta - tb) / ((tc - ta) * (tc - tb))};
}

}  // namespace

GeneratedData generate_samples(const ModelSpec& model, const SamplingConfig& config,
                               double horizon) {
    if (config.m < 2) throw ConfigError("need at least two samples");
    if (config.noise_sigma < 0) throw ConfigError("noise level must be nonnegative");

    const int m = config.m;
    Vec times(m);
    if (config.distribution == SampleDistribution::uniform) {
        for (int i = 0; i < m; ++i)
            times[i] = horizon * static_cast<double>(i) / (m - 1);
    } else {
        Rng rng(config.seed);
        for (int i = 0; i < m; ++i) times[i] = rng.uniform(0.0, horizon);
        std::sort(times.data(), times.data() + m);
        times[0] = 0.0;
        times[m - 1] = horizon;
    }

    DdeProblem problem;
    problem.rhs = model.rhs;
    problem.delays = model.delays;
    problem.history = model.phi;
    problem.t_span = {0.0, horizon};
    problem.rel_tol = config.rel_tol;
    problem.abs_tol = config.abs_tol;
    DenseSolution dense = solve_dde(problem);

    const int n = model.n;
    Mat X(m, n);
    for (int i = 0; i < m; ++i) X.row(i) = dense(times[i]).transpose();

    Mat dX(m, n);
    if (config.derivative_mode == DerivativeMode::exact_from_model) {
        std::vector<Vec> delayed(model.delays.size());
        for (int i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < model.delays.size(); ++k) {
                double q = times[i] - model.delays[k];
                delayed[k] = (q <= 0.0) ? model.phi(q) : dense(q);
            }
            dX.row(i) = model.rhs(times[i], X.row(i).transpose(), delayed).transpose();
        }
    }

    if (config.noise_sigma > 0.0) {
        // Seed offset keeps the noise stream independent of the random-time
        // stream while both remain reproducible.
        Rng rng(config.seed ^ 0x6e6f697365ULL);
        for (int j = 0; j < n; ++j) {
            double mean = X.col(j).mean();
            double sd = std::sqrt((X.col(j).array() - mean).square().mean());
            double level = config.noise_sigma * sd;
            for (int i = 0; i < m; ++i) X(i, j) += level * rng.normal();
        }
    }

    if (config.derivative_mode == DerivativeMode::finite_difference)
        dX = estimate_derivatives(times, X);

    SampleSet s;
    s.times = std::move(times);
    s.X = std::move(X);
    s.dX = std::move(dX);
    s.derivative_provenance = config.derivative_mode;
    s.boundary = static_cast<Index>(std::ceil(0.6 * m));
    return {std::move(s), std::move(dense)};
}

Mat estimate_derivatives(const Vec& times, const Mat& X) {
    const Index m = times.size();
    if (m < 3) throw InsufficientDataError("derivative estimation needs at least 3 samples");
    Mat dX(m, X.cols());
    for (Index i = 0; i < m; ++i) {
        Index a = std::clamp<Index>(i - 1, 0, m - 3);
        auto w = three_point_weights(times[a], times[a + 1], times[a + 2], times[i]);
        dX.row(i) = w[0] * X.row(a) + w[1] * X.row(a + 1) + w[2] * X.row(a + 2);
    }
    return dX;
}

Vec interp_linear(const Vec& times, const Mat& X, double query_time) {
    const Index m = times.size();
    const double slack = 1e-9 * std::max(1.0, times[m - 1] - times[0]);
    if (query_time < times[0] - slack || query_time > times[m - 1] + slack)
        throw std::domain_error("interpolation query outside the sample range");
    double t = std::clamp(query_time, times[0], times[m - 1]);

    const double* begin = times.data();
    Index i = static_cast<Index>(std::upper_bound(begin, begin + m, t) - begin) - 1;
    i = std::clamp<Index>(i, 0, m - 2);
    double w = (t - times[i]) / (times[i + 1] - times[i]);
    return ((1.0 - w) * X.row(i) + w * X.row(i + 1)).transpose();
}

namespace {

std::vector<Index> filtered_rows(const Vec& times, const std::vector<double>& offsets) {
    double min_off = 0.0;
    for (double o : offsets) min_off = std::min(min_off, o);
    std::vector<Index> rows;
    for (Index i = 0; i < times.size(); ++i)
        if (times[i] + min_off >= times[0] - 1e-12) rows.push_back(i);
    if (rows.empty())
        throw InsufficientDataError("no rows survive the delay filter");
    return rows;
}

}  // namespace

DelayedBlocks delayed_blocks(const SampleSet& samples, const std::vector<double>& offsets) {
    DelayedBlocks out;
    out.rows = filtered_rows(samples.times, offsets);
    const Index n = samples.dim();
    for (double off : offsets) {
        Mat block(static_cast<Index>(out.rows.size()), n);
        for (std::size_t r = 0; r < out.rows.size(); ++r)
            block.row(static_cast<Index>(r)) =
                interp_linear(samples.times, samples.X, samples.times[out.rows[r]] + off)
                    .transpose();
        out.blocks.push_back(std::move(block));
    }
    return out;
}

DelayedBlocks delayed_blocks_dense(const Vec& times, const std::vector<double>& offsets,
                                   const DenseSolution& dense, const History& phi) {
    DelayedBlocks out;
    out.rows = filtered_rows(times, offsets);
    const double t0 = dense.t_begin();
    const Index n = dense.step_states().front().size();
    for (double off : offsets) {
        Mat block(static_cast<Index>(out.rows.size()), n);
        for (std::size_t r = 0; r < out.rows.size(); ++r) {
            double q = times[out.rows[r]] + off;
            Vec v = (q < t0) ? phi(q - t0) : dense(q);
            block.row(static_cast<Index>(r)) = v.transpose();
        }
        out.blocks.push_back(std::move(block));
    }
    return out;
}

void write_csv(const SampleSet& samples, std::ostream& out) {
    const Index n = samples.dim();
    out << "t";
    for (Index j = 1; j <= n; ++j) out << ",x" << j;
    for (Index j = 1; j <= n; ++j) out << ",dx" << j;
    out << "\n";
    out << std::setprecision(17);
    for (Index i = 0; i < samples.rows(); ++i) {
        out << samples.times[i];
        for (Index j = 0; j < n; ++j) out << "," << samples.X(i, j);
        for (Index j = 0; j < n; ++j) out << "," << samples.dX(i, j);
        out << "\n";
    }
}

SampleSet read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InsufficientDataError("empty CSV");
    Index n = (static_cast<Index>(std::count(line.begin(), line.end(), ','))) / 2;
    std::vector<double> ts;
    std::vector<std::vector<double>> xs, dxs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<Index>(vals.size()) != 1 + 2 * n)
            throw InsufficientDataError("malformed CSV row");
        ts.push_back(vals[0]);
        xs.emplace_back(vals.begin() + 1, vals.begin() + 1 + n);
        dxs.emplace_back(vals.begin() + 1 + n, vals.end());
    }
    const Index m = static_cast<Index>(ts.size());
    if (m < 2) throw InsufficientDataError("CSV has fewer than two rows");
    SampleSet s;
    s.times = Eigen::Map<Vec>(ts.data(), m);
    s.X.resize(m, n);
    s.dX.resize(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) {
            s.X(i, j) = xs[i][j];
            s.dX(i, j) = dxs[i][j];
        }
    s.boundary = static_cast<Index>(std::ceil(0.6 * static_cast<double>(m)));
    return s;
}

}  // namespace ddesindy
