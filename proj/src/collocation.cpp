#include "ddesindy/collocation.hpp"

#include <cmath>
#include <stdexcept>

namespace ddesindy {

CollocationScheme make_scheme(int M, double tau_bar, int n) {
    if (M < 1) throw ConfigError("collocation degree must be at least 1");
    if (tau_bar <= 0) throw ConfigError("maximum delay must be positive");
    if (n < 1) throw ConfigError("state dimension must be at least 1");

    CollocationScheme s;
    s.M = M;
    s.tau_bar = tau_bar;
    s.n = n;
    s.nodes.resize(M + 1);
    for (int i = 0; i <= M; ++i)
        s.nodes[i] = 0.5 * tau_bar * (std::cos(i * M_PI / M) - 1.0);
    s.nodes[0] = 0.0;
    s.nodes[M] = -tau_bar;

    s.bary_weights.resize(M + 1);
    for (int i = 0; i <= M; ++i) s.bary_weights[i] = (i % 2 == 0) ? 1.0 : -1.0;
    s.bary_weights[0] *= 0.5;
    s.bary_weights[M] *= 0.5;

    Mat full(M + 1, M + 1);
    for (int i = 0; i <= M; ++i) {
        double diag = 0.0;
        for (int j = 0; j <= M; ++j) {
            if (j == i) continue;
            full(i, j) = (s.bary_weights[j] / s.bary_weights[i]) / (s.nodes[i] - s.nodes[j]);
            diag -= full(i, j);
        }
        full(i, i) = diag;
    }
    s.d_sub = full.bottomRows(M);
    return s;
}

Vec prolong(const CollocationScheme& scheme, const std::vector<Vec>& node_values, double eta) {
    if (static_cast<int>(node_values.size()) != scheme.M + 1)
        throw std::invalid_argument("prolong: expected M+1 node values");
    const double slack = 1e-12 * scheme.tau_bar;
    if (eta > slack || eta < -scheme.tau_bar - slack)
        throw std::domain_error("prolongation point outside [-tau_bar, 0]");

    for (int i = 0; i <= scheme.M; ++i)
        if (eta == scheme.nodes[i] || std::abs(eta - scheme.nodes[i]) < 1e-14 * scheme.tau_bar)
            return node_values[static_cast<std::size_t>(i)];

    Vec num = Vec::Zero(node_values[0].size());
    double den = 0.0;
    for (int i = 0; i <= scheme.M; ++i) {
        double c = scheme.bary_weights[i] / (eta - scheme.nodes[i]);
        num += c * node_values[static_cast<std::size_t>(i)];
        den += c;
    }
    return num / den;
}

OdeRhs assemble_field(const CollocationScheme& scheme, const Block0Rhs& block0_rhs) {
    if (!block0_rhs) throw std::invalid_argument("assemble_field: empty block-0 rhs");
    const int M = scheme.M, n = scheme.n;
    return [scheme, block0_rhs, M, n,
            vals = std::vector<Vec>(static_cast<std::size_t>(M + 1), Vec(n))](
               double, const Vec& u) mutable -> Vec {
        if (u.size() != static_cast<Index>(n) * (M + 1))
            throw std::invalid_argument("collocated state has wrong dimension");
        for (int i = 0; i <= M; ++i) vals[static_cast<std::size_t>(i)] = u.segment(i * n, n);
        Vec du(u.size());
        du.head(n) = block0_rhs(vals);
        for (int i = 1; i <= M; ++i) {
            Vec row = Vec::Zero(n);
            for (int j = 0; j <= M; ++j) row += scheme.d_sub(i - 1, j) * vals[static_cast<std::size_t>(j)];
            du.segment(i * n, n) = row;
        }
        return du;
    };
}

std::vector<double> collocation_offsets(const CollocationScheme& scheme) {
    std::vector<double> off;
    for (int i = 1; i <= scheme.M; ++i) off.push_back(scheme.nodes[i]);
    return off;
}

}  // namespace ddesindy
