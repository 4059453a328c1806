#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "gnf/errors.hpp"

namespace gnf::detail {

struct LsqResult {
    std::vector<double> coef;
    double r2 = 0.0;
};

/// Ordinary least squares for small dense systems (rows x: predictors).
inline LsqResult least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
    if (rows.empty() || rows.size() != y.size()) throw InsufficientDataError("least_squares: empty system");
    const auto m = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd X(m, p);
    Eigen::VectorXd Y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        Y(i) = y[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < p; ++j) X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    Eigen::VectorXd beta = X.colPivHouseholderQr().solve(Y);
    double ss_res = (X * beta - Y).squaredNorm();
    double mean = Y.mean();
    double ss_tot = (Y.array() - mean).square().sum();
    LsqResult r;
    for (Eigen::Index j = 0; j < p; ++j) r.coef.push_back(beta(j));
    r.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return r;
}

}  // namespace gnf::detail
