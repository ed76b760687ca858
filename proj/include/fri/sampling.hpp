#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fri/frames.hpp"
#include "fri/model.hpp"

namespace fri {

struct SamplingStrategy {
    enum class Kind { Uniform, Random, Minimal };

    Kind kind = Kind::Uniform;
    // Grid points per knot interval (splines) or random pool size per triangle;
    // for Minimal this is the candidate pool fed to the greedy extraction.
    int points_per_piece = 9;

    static SamplingStrategy uniform(int k) { return {Kind::Uniform, k}; }
    static SamplingStrategy random(int pool) { return {Kind::Random, pool}; }
    static SamplingStrategy minimal(int pool = 9) { return {Kind::Minimal, pool}; }
};

/// Samples of one piece: the points Gamma_theta, the frame Phi_theta(gamma)
/// they induce on R^{#K_theta}, and its certified stability.
struct SampleGroup {
    int theta = -1;
    std::vector<Index> active;        // K_theta, ascending; columns of the frame
    std::vector<DomainPoint> points;  // Gamma_theta, inside the open piece
    Eigen::MatrixXd frame;            // #points x #active
    double stability = 0.0;           // stability functional of the frame
    bool minimal = false;             // built by minimal-frame extraction

    int size() const { return static_cast<int>(points.size()); }
    FrameMatrix frame_matrix() const;
};

/// A phaseless sampling set Gamma = union of per-piece groups, every group
/// certified phase retrievable for its local coefficient space.  Pieces with
/// empty K_theta carry no samples and are omitted.
class SampleSet {
public:
    SampleSet(std::shared_ptr<const GeneratorModel> model, std::vector<SampleGroup> groups,
              SamplingStrategy strategy);

    const GeneratorModel& model() const { return *model_; }
    const std::shared_ptr<const GeneratorModel>& model_ptr() const { return model_; }
    const std::vector<SampleGroup>& groups() const { return groups_; }
    const SamplingStrategy& strategy() const { return strategy_; }

    int total_samples() const;
    std::vector<DomainPoint> all_points() const;

private:
    std::shared_ptr<const GeneratorModel> model_;
    std::vector<SampleGroup> groups_;
    SamplingStrategy strategy_;
};

SampleSet build_sampling_set(std::shared_ptr<const GeneratorModel> model, SamplingStrategy strategy,
                             std::uint64_t seed);

/// Magnitude samples z(gamma) = |f(gamma)| + noise, grouped like the owning
/// SampleSet, with the declared noise bound.
struct NoisySamples {
    std::vector<Eigen::VectorXd> values;  // aligned with SampleSet::groups()
    double noise_bound = 0.0;
};

NoisySamples take_samples(const Signal& f, const SampleSet& gamma, double eta, std::uint64_t seed);

/// R_Lambda(r): largest number of innovation positions in a closed ball of
/// radius r.  Exact in 1-D by sweeping pair midpoints; on a center grid in 2-D
/// (grid_per_dim <= 0 picks a default).
double covering_count(const GeneratorModel& model, double r, int grid_per_dim = 0);

/// N_T: largest number of pieces meeting one basis support.
int piece_multiplicity(const GeneratorModel& model);

/// Finite-window upper-density estimate: sup over interior window centers of
/// count / measure of B(x, r).  Centers keep B(x, r) inside the domain, so the
/// measure is 2r (1-D) or pi r^2 (2-D).
double upper_density(const std::vector<DomainPoint>& points, double r, const GeneratorModel& model);

struct DensityReport {
    double window_radius = 0.0;
    double density_samples = 0.0;    // finite-window estimate for Gamma
    double density_innovations = 0.0;  // finite-window estimate for Lambda
    double covering_2r0 = 0.0;       // R_Lambda(2 r_0)
    int multiplicity = 0;            // N_T
    double upper_bound = 0.0;        // R(R+1)/2 * N_T * density_innovations
    bool lower_ok = false;           // density_samples >= density_innovations (5% allowance)
    bool upper_ok = false;           // density_samples <= upper_bound (5% allowance)
    bool minimal_strategy = false;   // upper bound only guaranteed for minimal frames
};

DensityReport density_bound_check(const GeneratorModel& model, const SampleSet& gamma, double r);

}  // namespace fri
