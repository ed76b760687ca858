#pragma once

#include <Eigen/Dense>

namespace fri {

inline constexpr double kDefaultRankTol = 1e-8;  // relative to the largest singular value

// Numerical rank with threshold rel_tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = kDefaultRankTol);

bool has_full_column_rank(const Eigen::MatrixXd& m, double rel_tol = kDefaultRankTol);

// Smallest singular value of m as a map R^cols -> R^rows; zero when rows < cols.
double smallest_singular_value(const Eigen::MatrixXd& m);

}  // namespace fri
