#pragma once

#include <functional>
#include <vector>

#include "ddesindy/integrate.hpp"
#include "ddesindy/types.hpp"

namespace ddesindy {

// Chebyshev extremal nodes on [-tau_bar, 0] and the associated barycentric
// differentiation matrix, rows 1..M only (row 0 is the learned dynamics).
struct CollocationScheme {
    int M = 0;
    double tau_bar = 0.0;
    int n = 1;
    Vec nodes;          // size M+1, descending from 0 to -tau_bar
    Vec bary_weights;   // (-1)^i, halved at both ends
    Mat d_sub;          // M x (M+1) scalar differentiation rows
};

using Block0Rhs = std::function<Vec(const std::vector<Vec>&)>;

CollocationScheme make_scheme(int M, double tau_bar, int n);

Vec prolong(const CollocationScheme& scheme, const std::vector<Vec>& node_values, double eta);

// Eq.-(6)-style field: block 0 from the learned rhs, blocks 1..M from the
// differentiation rows. The returned function is an OdeRhs on n(M+1) states.
OdeRhs assemble_field(const CollocationScheme& scheme, const Block0Rhs& block0_rhs);

// Offsets eta_1..eta_M for delayed-block extraction (eta_0 = 0 is the data).
std::vector<double> collocation_offsets(const CollocationScheme& scheme);

}  // namespace ddesindy
