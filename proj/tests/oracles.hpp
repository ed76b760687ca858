// Test-only oracles, kept independent of the library code paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fri/maps.hpp"
#include "fri/model.hpp"
#include "fri/sampling.hpp"

namespace oracles {

// Truncated-power form of the normalized cubic B-spline on knots t[0..4]:
// (t4 - t0) * sum_l (x - t_l)_+^3 / prod_{j != l} (t_l - t_j).
inline double bspline_truncated_power(const double* t, double x) {
    double sum = 0.0;
    for (int l = 0; l <= 4; ++l) {
        const double d = x - t[l];
        if (d <= 0.0) continue;
        double denom = 1.0;
        for (int j = 0; j <= 4; ++j)
            if (j != l) denom *= t[l] - t[j];
        sum += d * d * d / denom;
    }
    return (t[4] - t[0]) * sum;
}

// Open-interval intersection on the knot line.
inline bool spline_supports_overlap(const std::vector<double>& knots, fri::Index a, fri::Index b) {
    const double lo = std::max(knots[static_cast<std::size_t>(a)], knots[static_cast<std::size_t>(b)]);
    const double hi = std::min(knots[static_cast<std::size_t>(a) + 4], knots[static_cast<std::size_t>(b) + 4]);
    return lo < hi;
}

// Exhaustive local solve over all sign patterns, each via an SVD-based
// least-squares fit with an explicitly recomputed residual.
inline double exhaustive_local_minimum(const Eigen::MatrixXd& design, const Eigen::VectorXd& z) {
    const int m = static_cast<int>(design.rows());
    double best = std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    for (std::uint64_t mask = 0; mask < (1ULL << (m - 1)); ++mask) {
        Eigen::VectorXd v = z;
        for (int i = 1; i < m; ++i)
            if ((mask >> (i - 1)) & 1) v(i) = -v(i);
        const Eigen::VectorXd d = svd.solve(v);
        best = std::min(best, (design * d - v).squaredNorm());
    }
    return best;
}

// Sign-consistency brute force: the frame fails phase retrievability iff some
// sign pattern admits two measurement-equal vectors that are not +-equal.
// Works in R^{2n} on the stacked system <v, f_m> = eps_m <w, f_m>.
inline bool frame_pr_by_sign_consistency(const Eigen::MatrixXd& rows, double kernel_tol = 1e-9,
                                         double match_tol = 1e-7) {
    const int m = static_cast<int>(rows.rows());
    const int n = static_cast<int>(rows.cols());
    for (std::uint64_t mask = 0; mask < (1ULL << (m - 1)); ++mask) {
        Eigen::MatrixXd sys(m, 2 * n);
        for (int i = 0; i < m; ++i) {
            const double eps = (i > 0 && ((mask >> (i - 1)) & 1)) ? -1.0 : 1.0;
            sys.block(i, 0, 1, n) = rows.row(i);
            sys.block(i, n, 1, n) = -eps * rows.row(i);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double scale = sv.size() > 0 ? std::max(sv(0), 1.0) : 1.0;
        bool any_sym = false, any_anti = false;  // kernel members with v = w / v = -w
        for (int c = 0; c < 2 * n; ++c) {
            const double sigma = c < sv.size() ? sv(c) : 0.0;
            if (sigma > kernel_tol * scale) continue;
            const Eigen::VectorXd k = svd.matrixV().col(c);
            const Eigen::VectorXd v = k.head(n), w = k.tail(n);
            const bool sym = (v - w).norm() <= match_tol;
            const bool anti = (v + w).norm() <= match_tol;
            if (sym && !anti) any_sym = true;
            if (anti && !sym) any_anti = true;
            if (!sym && !anti) return false;  // direct collision witness
        }
        if (any_sym && any_anti) return false;  // mixed kernel: combine for a witness
    }
    return true;
}

// Connected components via adjacency-matrix reachability (no union-find).
inline int component_count(const std::vector<fri::Index>& vertices,
                           const std::vector<std::pair<fri::Index, fri::Index>>& edges) {
    const int n = static_cast<int>(vertices.size());
    std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n),
                                         std::vector<bool>(static_cast<std::size_t>(n), false));
    auto pos = [&](fri::Index v) {
        return std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin();
    };
    for (int i = 0; i < n; ++i) reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = true;
    for (const auto& [a, b] : edges) {
        reach[static_cast<std::size_t>(pos(a))][static_cast<std::size_t>(pos(b))] = true;
        reach[static_cast<std::size_t>(pos(b))][static_cast<std::size_t>(pos(a))] = true;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    int components = 0;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        if (seen[static_cast<std::size_t>(i)]) continue;
        ++components;
        for (int j = 0; j < n; ++j)
            if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                seen[static_cast<std::size_t>(j)] = true;
    }
    return components;
}

}  // namespace oracles
