#include "ddesindy/regression.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ddesindy {

Vec least_squares(const Mat& A, const Vec& b, double ridge) {
    if (A.rows() != b.size()) throw std::invalid_argument("least_squares: shape mismatch");
    if (ridge < 0) throw ConfigError("ridge must be nonnegative");
    if (ridge == 0.0)
        return A.completeOrthogonalDecomposition().solve(b);
    const Index m = A.rows(), p = A.cols();
    Mat aug(m + p, p);
    aug.topRows(m) = A;
    aug.bottomRows(p) = std::sqrt(ridge) * Mat::Identity(p, p);
    Vec rhs = Vec::Zero(m + p);
    rhs.head(m) = b;
    return aug.completeOrthogonalDecomposition().solve(rhs);
}

namespace {

Vec basic_solve(const Mat& A, const Vec& b) {
    const Index m = A.rows(), p = A.cols();
    Eigen::ColPivHouseholderQR<Mat> qr(A);
    const Mat& R = qr.matrixR();
    const Index k = std::min(m, p);
    const double tol = static_cast<double>(std::max(m, p)) *
                       std::numeric_limits<double>::epsilon() *
                       (k > 0 ? std::abs(R(0, 0)) : 1.0);
    Index rank = 0;
    for (Index i = 0; i < k; ++i)
        if (std::abs(R(i, i)) > tol) ++rank;

    Vec x = Vec::Zero(p);
    if (rank > 0) {
        Vec qtb = b;
        qtb.applyOnTheLeft(qr.householderQ().transpose());
        Vec z = R.topLeftCorner(rank, rank)
                    .triangularView<Eigen::Upper>()
                    .solve(qtb.head(rank));
        const auto& perm = qr.colsPermutation().indices();
        for (Index i = 0; i < rank; ++i) x(perm(i)) = z(i);
    }
    return x;
}

Vec solve_active(const Mat& theta, const Vec& b, const std::vector<Index>& active,
                 const StlsqConfig& config) {
    Mat sub(theta.rows(), static_cast<Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) sub.col(static_cast<Index>(k)) = theta.col(active[k]);
    return config.solver == SolverMode::basic ? basic_solve(sub, b)
                                              : least_squares(sub, b, config.ridge);
}

}  // namespace

SparseCoefficients stlsq(const Mat& theta, const Mat& dX, const StlsqConfig& config) {
    if (theta.rows() != dX.rows()) throw std::invalid_argument("stlsq: row mismatch");
    if (config.threshold <= 0) throw ConfigError("threshold must be positive");
    const Index p = theta.cols(), n = dX.cols();

    SparseCoefficients out;
    out.xi = Mat::Zero(p, n);
    out.active.resize(static_cast<std::size_t>(n));

    for (Index j = 0; j < n; ++j) {
        std::vector<Index> active(static_cast<std::size_t>(p));
        std::iota(active.begin(), active.end(), Index{0});
        Vec coef = solve_active(theta, dX.col(j), active, config);

        for (int it = 0; it < config.max_iterations && !active.empty(); ++it) {
            std::vector<Index> keep;
            for (std::size_t k = 0; k < active.size(); ++k)
                if (std::abs(coef[static_cast<Index>(k)]) >= config.threshold)
                    keep.push_back(active[k]);
            if (keep.size() == active.size()) break;
            active = std::move(keep);
            if (active.empty()) break;
            coef = solve_active(theta, dX.col(j), active, config);
        }

        for (std::size_t k = 0; k < active.size(); ++k)
            out.xi(active[k], j) = coef[static_cast<Index>(k)];
        out.active[static_cast<std::size_t>(j)] = std::move(active);
    }
    return out;
}

SparseCoefficients stlsq(const FeatureMatrix& theta, const Mat& dX, const StlsqConfig& config) {
    SparseCoefficients out = stlsq(theta.theta, dX, config);
    out.descriptors = theta.descriptors;
    return out;
}

double residual_norm(const Mat& theta, const Mat& xi, const Mat& dX) {
    if (theta.cols() != xi.rows() || theta.rows() != dX.rows() || xi.cols() != dX.cols())
        throw std::invalid_argument("residual_norm: shape mismatch");
    return (dX - theta * xi).norm();
}

}  // namespace ddesindy
