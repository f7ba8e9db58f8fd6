#pragma once

#include <string>
#include <vector>

#include "ddesindy/features.hpp"
#include "ddesindy/types.hpp"

namespace ddesindy {

enum class SolverMode {
    minnorm,  // complete orthogonal decomposition, minimum-norm solution
    basic     // column-pivoted QR with rank truncation (mldivide-style)
};

struct StlsqConfig {
    double threshold = 0.05;
    double ridge = 0.0;
    int max_iterations = 10;
    SolverMode solver = SolverMode::minnorm;
};

struct SparseCoefficients {
    Mat xi;  // p x n, exact zeros outside the active sets
    std::vector<std::vector<Index>> active;  // per output column, ascending
    std::vector<std::string> descriptors;
};

Vec least_squares(const Mat& A, const Vec& b, double ridge = 0.0);

SparseCoefficients stlsq(const Mat& theta, const Mat& dX, const StlsqConfig& config);
SparseCoefficients stlsq(const FeatureMatrix& theta, const Mat& dX, const StlsqConfig& config);

double residual_norm(const Mat& theta, const Mat& xi, const Mat& dX);

}  // namespace ddesindy
