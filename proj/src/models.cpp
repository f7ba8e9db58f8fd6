#include "ddesindy/models.hpp"

#include <cmath>

namespace ddesindy {

namespace {

Vec scalar(double v) {
    Vec x(1);
    x[0] = v;
    return x;
}

ModelSpec make_logistic() {
    ModelSpec m;
    m.name = "logistic";
    m.n = 1;
    m.params = {{"r", 1.8}, {"tau", 1.0}};
    m.delays = {1.0};
    m.rhs = [](double, const Vec& x, const std::vector<Vec>& xd) {
        return scalar(1.8 * x[0] * (1.0 - xd[0][0]));
    };
    m.phi = [](double eta) { return scalar(std::cos(eta)); };
    return m;
}

ModelSpec make_mackey_glass() {
    ModelSpec m;
    m.name = "mackey-glass";
    m.n = 1;
    m.params = {{"beta", 4.0}, {"gamma", 2.0}, {"tau", 1.0}, {"alpha", 9.6}};
    m.delays = {1.0};
    m.rhs = [](double, const Vec& x, const std::vector<Vec>& xd) {
        double u = xd[0][0];
        return scalar(4.0 * u / (1.0 + std::pow(u, 9.6)) - 2.0 * x[0]);
    };
    m.phi = [](double eta) { return scalar(std::cos(eta)); };
    return m;
}

ModelSpec make_two_delay() {
    ModelSpec m;
    m.name = "two-delay";
    m.n = 1;
    m.params = {{"a2", -1.0}, {"a3", -1.0}, {"tau1", 0.65}, {"tau2", 1.2}};
    m.delays = {0.65, 1.2};
    // Cubic on the short delay, quadratic on the long one. The opposite
    // pairing escapes to -infinity in finite time under phi = cos and can
    // produce no 30-unit trajectory at all.
    m.rhs = [](double, const Vec&, const std::vector<Vec>& xd) {
        double u = xd[0][0], v = xd[1][0];
        return scalar(-u * u * u - v * v);
    };
    m.phi = [](double eta) { return scalar(std::cos(eta)); };
    return m;
}

ModelSpec make_rossler() {
    ModelSpec m;
    m.name = "rossler";
    m.n = 3;
    m.params = {{"alpha1", 0.2}, {"alpha2", 0.5}, {"beta1", 0.2},
                {"beta2", 0.2}, {"tau1", 1.5},    {"tau2", 2.0}};
    m.delays = {1.5, 2.0};
    m.rhs = [](double, const Vec& x, const std::vector<Vec>& xd) {
        Vec f(3);
        f[0] = -x[1] - x[2] + 0.2 * xd[0][0] + 0.5 * xd[1][0];
        f[1] = x[0] + 0.2 * x[1];
        f[2] = 0.2 + x[2] * (x[0] - 1.0);
        return f;
    };
    m.phi = [](double) {
        Vec v(3);
        v << 1.5, 0.4, 0.9;
        return v;
    };
    return m;
}

}  // namespace

std::vector<ModelSpec> builtin_models() {
    return {make_logistic(), make_mackey_glass(), make_two_delay(), make_rossler()};
}

const ModelSpec& find_model(const std::string& name) {
    static const std::vector<ModelSpec> models = builtin_models();
    for (const auto& m : models)
        if (m.name == name) return m;
    throw ConfigError("unknown model: " + name);
}

}  // namespace ddesindy
