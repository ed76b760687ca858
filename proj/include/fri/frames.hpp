#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fri/linalg.hpp"
#include "fri/model.hpp"

namespace fri {

// Exact subset enumeration is refused above this frame size.
inline constexpr int kMaxFrameSize = 24;

struct FrameProvenance {
    int theta = -1;
    std::vector<DomainPoint> points;
};

/// A finite real frame: M row vectors of dimension n, optionally remembering
/// the sample points they were evaluated at.
struct FrameMatrix {
    Eigen::MatrixXd vectors;  // M x n
    std::optional<FrameProvenance> provenance;

    int size() const { return static_cast<int>(vectors.rows()); }
    int dim() const { return static_cast<int>(vectors.cols()); }
};

/// A bipartition of the frame rows, as row indices.
struct FrameSplit {
    std::vector<int> subset;
    std::vector<int> complement;
};

/// Complement property: every split of the rows leaves one side spanning R^n.
/// Equivalent to real phase retrievability of the measurement map
/// v -> (|<v, f_m>|)_m.
bool is_phase_retrievable_frame(const FrameMatrix& f, double rank_tol = kDefaultRankTol);

/// Phase retrievable, and no proper subset is.
bool is_minimal_pr_frame(const FrameMatrix& f, double rank_tol = kDefaultRankTol);

/// Stability functional: min over splits of the better side's smallest
/// singular value; positive exactly when the frame is phase retrievable.
double stability_norm(const FrameMatrix& f);

struct StabilityReport {
    double norm = 0.0;
    FrameSplit worst;
};
StabilityReport stability_report(const FrameMatrix& f);

/// Greedy extraction of a minimal phase retrievable frame from a candidate
/// pool: grow by the candidate that maximizes the stability functional, then
/// prune removable vectors to a fixed point.  Ties break by candidate index.
FrameMatrix extract_minimal_pr_frame(
    const std::vector<std::pair<DomainPoint, Eigen::VectorXd>>& candidates,
    double rank_tol = kDefaultRankTol);

}  // namespace fri
