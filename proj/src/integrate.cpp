#include "ddesindy/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddesindy {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Error coefficients: 5th-order weights minus the embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Weights of the quartic interpolant's top coefficient.
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

}  // namespace

Vec DenseSolution::operator()(double t) const {
    Vec out;
    eval_into(t, out);
    return out;
}

void DenseSolution::eval_into(double t, Vec& out) const {
    if (rcont_.empty())
        throw std::domain_error("dense solution has no accepted steps");
    const double lo = ts_.front(), hi = ts_.back();
    const double slack = 1e-9 * std::max(1.0, hi - lo);
    if (t < lo - slack || t > hi + slack)
        throw std::domain_error("dense solution evaluated outside its span");
    t = std::clamp(t, lo, hi);

    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t i = (it == ts_.begin()) ? 0 : static_cast<std::size_t>(it - ts_.begin()) - 1;
    if (i >= rcont_.size()) i = rcont_.size() - 1;

    if (t == ts_[i + 1]) {  // exact at accepted step times, including t_end
        out = states_[i + 1];
        return;
    }
    const double h = ts_[i + 1] - ts_[i];
    const double th = (t - ts_[i]) / h;
    const double th1 = 1.0 - th;
    const auto& r = rcont_[i];
    out = r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])));
}

// Shared adaptive driver. A step-size ceiling and forced stop points make it
// serve both the plain ODE path and the per-segment method-of-steps path.
class Dopri5Driver {
public:
    Dopri5Driver(OdeRhs rhs, Vec y0, double t0, double rtol, double atol,
                 std::int64_t max_steps, double diverge_bound)
        : rhs_(std::move(rhs)),
          y_(std::move(y0)),
          t_(t0),
          rtol_(rtol),
          atol_(atol),
          max_steps_(max_steps),
          diverge_bound_(diverge_bound) {
        sol_.ts_.push_back(t_);
        sol_.states_.push_back(y_);
        k1_ = rhs_(t_, y_);
        check_finite(k1_);
    }

    // Advance to t_stop, recording dense output. h_cap bounds individual
    // steps (used to keep delayed-state lookups behind the step start).
    void advance(double t_stop, double h_cap) {
        if (h_ <= 0.0) h_ = initial_step(std::min(t_stop - t_, h_cap));
        while (t_ < t_stop) {
            if (++steps_ > max_steps_)
                throw IntegrationError("step budget exhausted", t_);
            double h = std::min({h_, h_cap, t_stop - t_});
            bool hit_stop = (t_ + h >= t_stop);
            if (hit_stop) h = t_stop - t_;

            const Vec k2 = eval(t_ + c2 * h, y_ + h * (a21 * k1_));
            const Vec k3 = eval(t_ + c3 * h, y_ + h * (a31 * k1_ + a32 * k2));
            const Vec k4 = eval(t_ + c4 * h, y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3));
            const Vec k5 = eval(t_ + c5 * h, y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
            const Vec k6 = eval(t_ + h, y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Vec y1 = y_ + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Vec k7 = eval(t_ + h, y1);

            const Vec err_vec = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double err = 0.0;
            for (Index j = 0; j < y_.size(); ++j) {
                double sc = atol_ + rtol_ * std::max(std::abs(y_[j]), std::abs(y1[j]));
                double q = err_vec[j] / sc;
                err += q * q;
            }
            err = std::sqrt(err / static_cast<double>(y_.size()));

            if (err <= 1.0) {
                std::array<Vec, 5> rc;
                const Vec ydiff = y1 - y_;
                rc[0] = y_;
                rc[1] = ydiff;
                rc[2] = h * k1_ - ydiff;
                rc[3] = ydiff - h * k7 - rc[2];
                rc[4] = h * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                sol_.rcont_.push_back(std::move(rc));

                t_ = hit_stop ? t_stop : t_ + h;
                y_ = y1;
                k1_ = k7;  // FSAL
                sol_.ts_.push_back(t_);
                sol_.states_.push_back(y_);
                if (y_.cwiseAbs().maxCoeff() > diverge_bound_)
                    throw IntegrationError("solution diverged", t_);

                double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
                h_ = h * std::min(rejected_ ? 1.0 : 5.0, std::max(0.2, fac));
                rejected_ = false;
            } else {
                double fac = 0.9 * std::pow(err, -0.2);
                h_ = h * std::max(0.2, fac);
                rejected_ = true;
                if (h_ < 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_)))
                    throw IntegrationError("step size underflow", t_);
            }
        }
    }

    DenseSolution take() { return std::move(sol_); }
    const DenseSolution& record() const { return sol_; }
    double current_time() const { return t_; }

private:
    Vec eval(double t, const Vec& y) {
        Vec f = rhs_(t, y);
        check_finite(f);
        return f;
    }

    void check_finite(const Vec& f) const {
        if (!f.allFinite())
            throw IntegrationError("non-finite derivative", t_);
    }

    double initial_step(double span) const {
        Vec sc = (atol_ + rtol_ * y_.cwiseAbs().array()).matrix();
        double d0 = std::sqrt((y_.array() / sc.array()).square().mean());
        double d1 = std::sqrt((k1_.array() / sc.array()).square().mean());
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, span);
        Vec y1 = y_ + h0 * k1_;
        Vec f1 = rhs_(t_ + h0, y1);
        double d2 = std::sqrt(((f1 - k1_).array() / sc.array()).square().mean()) / h0;
        double h1 = (std::max(d1, d2) <= 1e-15)
                        ? std::max(1e-6, h0 * 1e-3)
                        : std::pow(0.01 / std::max(d1, d2), 0.2);
        return std::min({100.0 * h0, h1, span});
    }

    OdeRhs rhs_;
    Vec y_;
    Vec k1_;
    double t_;
    double rtol_, atol_;
    std::int64_t max_steps_;
    double diverge_bound_;
    DenseSolution sol_;
    double h_ = 0.0;
    std::int64_t steps_ = 0;
    bool rejected_ = false;
};

DenseSolution solve_ode(const OdeProblem& problem) {
    if (problem.t_span.second <= problem.t_span.first)
        throw ConfigError("t_span must satisfy t1 > t0");
    if (problem.rel_tol <= 0 || problem.abs_tol <= 0)
        throw ConfigError("tolerances must be positive");

    Dopri5Driver driver(problem.rhs, problem.initial_state, problem.t_span.first,
                        problem.rel_tol, problem.abs_tol, problem.max_steps,
                        problem.diverge_bound);
    driver.advance(problem.t_span.second, std::numeric_limits<double>::infinity());
    return driver.take();
}

DenseSolution solve_dde(const DdeProblem& problem) {
    const auto [t0, t1] = problem.t_span;
    if (t1 <= t0) throw ConfigError("t_span must satisfy t1 > t0");
    if (problem.delays.empty()) throw ConfigError("delay list is empty");
    for (std::size_t i = 0; i < problem.delays.size(); ++i) {
        if (problem.delays[i] <= 0) throw ConfigError("delays must be positive");
        if (i && problem.delays[i] <= problem.delays[i - 1])
            throw ConfigError("delays must be strictly ascending");
    }
    const double tau_min = problem.delays.front();
    const double tau_max = problem.delays.back();

    // The t0 discontinuity propagates to sums of delays; restarting there
    // keeps the error estimator honest while the solution is still rough.
    std::vector<double> breaks{0.0};
    for (int order = 0; order < problem.breakpoint_order; ++order) {
        std::vector<double> next;
        for (double b : breaks)
            for (double tau : problem.delays) next.push_back(b + tau);
        for (double b : next)
            if (b < t1 - t0 - 1e-12) breaks.push_back(b);
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                     breaks.end());
    }
    std::vector<double> stops;
    for (double b : breaks)
        if (b > 1e-12) stops.push_back(t0 + b);
    stops.push_back(t1);

    // The driver's own dense record doubles as the lookback table: it only
    // grows, and steps are capped at the smallest delay, so every delayed
    // lookup lands at or before the current step start.
    const DenseSolution* lookback = nullptr;
    auto history_at = [&](double rel) {
        if (rel < -tau_max - 1e-9)
            throw std::domain_error("history queried before -max delay");
        return problem.history(std::min(rel, 0.0));
    };

    std::vector<Vec> delayed(problem.delays.size());
    OdeRhs wrapped = [&](double t, const Vec& y) {
        for (std::size_t i = 0; i < problem.delays.size(); ++i) {
            double q = t - problem.delays[i];
            if (q <= t0)
                delayed[i] = history_at(q - t0);
            else
                lookback->eval_into(q, delayed[i]);
        }
        return problem.rhs(t, y, delayed);
    };

    // The constructor's single rhs call happens at t0, where all delayed
    // queries fall to the history branch, so wiring lookback afterwards is
    // safe.
    Dopri5Driver driver(wrapped, problem.history(0.0), t0, problem.rel_tol,
                        problem.abs_tol, problem.max_steps, problem.diverge_bound);
    lookback = &driver.record();
    for (double stop : stops) driver.advance(stop, tau_min);
    return driver.take();
}

}  // namespace ddesindy
