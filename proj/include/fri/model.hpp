#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace fri {

using Index = std::int64_t;

inline constexpr double kZeroTol = 1e-12;  // |c_lambda| below this counts as zero

// A point of the signal domain: 1-D for interval models, 2-D for
// triangulation models.
struct DomainPoint {
    double x = 0.0;
    double y = 0.0;
    int dim = 1;

    static DomainPoint interval(double x) { return DomainPoint{x, 0.0, 1}; }
    static DomainPoint plane(double x, double y) { return DomainPoint{x, y, 2}; }
};

double distance(const DomainPoint& a, const DomainPoint& b);

/// Non-uniform cubic splines on [a, b] with strictly increasing knots
/// t_0 = a < t_1 < ... < t_N = b.  Basis n (0 <= n <= N-4) is the normalized
/// cubic B-spline on the knots t_n..t_{n+4}: it is continuous, vanishes
/// outside (t_n, t_{n+4}), and the family sums to one on [t_3, t_{N-3}].
class SplineModel {
public:
    explicit SplineModel(std::vector<double> knots);

    double a() const { return knots_.front(); }
    double b() const { return knots_.back(); }
    int num_intervals() const { return static_cast<int>(knots_.size()) - 1; }  // N
    const std::vector<double>& knots() const { return knots_; }

    // Evaluation by the Cox-de Boor recursion (stable for close knots).
    double eval_basis(Index n, double x) const;

    // Knot span containing x: largest i with t_i <= x (x = b maps to N-1).
    int find_span(double x) const;

private:
    std::vector<double> knots_;
};

/// Continuous piecewise-affine "hat" basis on a conforming triangulation.
/// phi_lambda is 1 at node lambda, 0 at every other node, affine on each
/// triangle, and supported on the star of triangles incident to lambda.
class TriangulationModel {
public:
    struct Triangle {
        int v[3];
    };

    TriangulationModel(std::vector<DomainPoint> nodes, std::vector<Triangle> triangles,
                       std::vector<Index> inner_nodes);

    // Structured right-triangle mesh on [x0, x0+cols*cell] x [y0, y0+rows*cell];
    // inner nodes are the non-boundary grid nodes.
    static TriangulationModel structured(int rows, int cols, double cell = 1.0, double x0 = 0.0,
                                         double y0 = 0.0);

    const std::vector<DomainPoint>& nodes() const { return nodes_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<Index>& inner_nodes() const { return inner_nodes_; }
    bool is_inner(Index node) const;

    int num_triangles() const { return static_cast<int>(triangles_.size()); }
    const std::vector<int>& incident_triangles(Index node) const;

    // Barycentric coordinates of p in triangle theta; all >= -tol iff inside.
    void barycentric(int theta, const DomainPoint& p, double bary[3]) const;
    bool triangle_contains(int theta, const DomainPoint& p, double tol = 1e-12) const;

    double eval_basis(Index node, const DomainPoint& p) const;
    // Any triangle containing p, or -1.
    int locate(const DomainPoint& p, double tol = 1e-12) const;

private:
    std::vector<DomainPoint> nodes_;
    std::vector<Triangle> triangles_;
    std::vector<Index> inner_nodes_;
    std::vector<std::vector<int>> node_triangles_;  // per node, incident triangle ids
    std::vector<char> inner_mask_;
};

/// A generator family: one of the two concrete models together with the
/// support radius r_0 and the piece family (open knot intervals for splines,
/// open triangles for triangulations).  Immutable after construction.
class GeneratorModel {
public:
    explicit GeneratorModel(SplineModel m, std::optional<double> support_radius = {});
    explicit GeneratorModel(TriangulationModel m, std::optional<double> support_radius = {});

    int dim() const { return is_spline() ? 1 : 2; }
    bool is_spline() const { return std::holds_alternative<SplineModel>(variant_); }
    const SplineModel& spline() const { return std::get<SplineModel>(variant_); }
    const TriangulationModel& triangulation() const { return std::get<TriangulationModel>(variant_); }

    double support_radius() const { return r0_; }
    // Smallest radius for which every basis support fits in B(anchor, r).
    double min_support_radius() const { return min_r0_; }

    // Innovation positions, ascending: spline basis indices 0..N-4, or inner
    // node ids for triangulations.
    const std::vector<Index>& innovation_ids() const { return innovation_ids_; }
    bool is_innovation(Index lambda) const;
    // Ball center for the support condition: spline support midpoints, or the
    // node position itself.
    DomainPoint anchor(Index lambda) const;

    int num_pieces() const;
    // K_theta: ids of basis functions not identically zero on piece theta.
    std::vector<Index> active_indices(int theta) const;
    // Point of the open piece theta at parameters u (and v for triangles) in (0,1).
    DomainPoint piece_point(int theta, double u, double v = 0.0) const;

    double eval_basis(Index lambda, const DomainPoint& x) const;
    // S_Phi(lambda, lambda') != empty: the open supports intersect.
    bool support_overlap(Index la, Index lb) const;
    bool in_domain(const DomainPoint& x) const;

    // max_lambda sup |phi_lambda|, estimated on the dense evaluation grid.
    double sup_norm() const { return sup_norm_; }

private:
    void validate_point(const DomainPoint& x) const;
    void require_innovation(Index lambda) const;
    void compute_sup_norm();

    std::variant<SplineModel, TriangulationModel> variant_;
    double r0_ = 0.0;
    double min_r0_ = 0.0;
    std::vector<Index> innovation_ids_;
    double sup_norm_ = 0.0;  // fixed at construction
};

/// A sparse real coefficient vector over the innovation positions of a model.
class Signal {
public:
    Signal(std::shared_ptr<const GeneratorModel> model, std::map<Index, double> coeffs);

    const GeneratorModel& model() const { return *model_; }
    const std::shared_ptr<const GeneratorModel>& model_ptr() const { return model_; }
    const std::map<Index, double>& coeffs() const { return coeffs_; }
    double coeff(Index lambda) const;

    double eval(const DomainPoint& x) const;

private:
    std::shared_ptr<const GeneratorModel> model_;
    std::map<Index, double> coeffs_;
};

/// Dense evaluation grid: 20 points per knot interval, or the 15 barycentric
/// lattice points (i+j+k=4) per triangle.  Each point carries its piece so
/// grid evaluation can skip the locate step.
struct GridPoint {
    DomainPoint x;
    int piece;
};

std::vector<GridPoint> evaluation_grid(const GeneratorModel& model);

double eval_at(const Signal& f, const GridPoint& p);

struct LocalIndependenceReport {
    bool independent = false;
    bool vacuous = false;  // empty K_theta: vacuously true, flagged
    double smallest_relative_sv = 0.0;
};

/// Samples the active basis on quasi-random interior points of piece theta and
/// tests numerical column rank (threshold tol * sigma_max).
LocalIndependenceReport check_local_linear_independence(const GeneratorModel& model, int theta,
                                                        double tol = 1e-8);

}  // namespace fri
