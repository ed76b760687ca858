#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fri/sampling.hpp"

namespace fri {

// Sign enumeration is refused above this many samples per piece.
inline constexpr int kMaxLocalSamples = 20;

/// Exact solution of one local magnitude fit: the best least-squares
/// coefficients over all per-sample sign patterns.
struct LocalSolution {
    int theta = -1;
    std::vector<Index> active;   // K_theta, column order of coeffs
    Eigen::VectorXd coeffs;      // c_{eta,theta} over active
    Eigen::VectorXd signs;       // optimal per-sample signs, first fixed +1
    double residual = 0.0;       // achieved objective
};

/// Enumerates the 2^(M-1) sign patterns (global sign fixed on the first
/// sample), solving an ordinary least-squares problem for each; lowest
/// residual wins, exact ties break to the lexicographically smallest sign
/// vector (-1 before +1).
LocalSolution solve_local(const SampleGroup& group, const Eigen::VectorXd& z);

/// Phase adjustment threshold M_0 = 24 max_theta(#Gamma_theta / stability^2) eta^2.
double compute_threshold(const SampleSet& gamma, double eta_inf);

/// Signs per local solution so every pairwise inner product of adjusted
/// vectors is at least -m0.  Spanning-forest propagation over strong-overlap
/// edges (|inner product| > m0), then full pairwise verification.
std::vector<int> adjust_phases(const std::vector<LocalSolution>& locals, double m0);

/// Coefficient-wise average of the adjusted local solutions over the pieces
/// where each position is active.
Signal sew(const std::vector<LocalSolution>& locals, const std::vector<int>& signs,
           std::shared_ptr<const GeneratorModel> model);

struct ReconstructOptions {
    std::optional<Signal> truth;       // enables sup_err
    std::optional<double> m0_override;
    std::optional<double> eta_bound;   // overrides the samples' declared bound
};

struct ReconstructionMetrics {
    std::optional<double> sup_err;     // max grid | |g|-|f| | against the truth
    double bound_value = 0.0;          // theoretical sup-error bound for this set
    double max_group_factor = 0.0;     // max_theta sqrt(#Gamma_theta)/stability
    double covering_r0 = 0.0;          // R_Lambda(r_0)
    double generator_sup = 0.0;        // sup norm of the basis family
    double eta_inf = 0.0;
    double runtime_seconds = 0.0;
    double t_local = 0.0, t_adjust = 0.0, t_sew = 0.0;
};

struct ReconstructionReport {
    Signal reconstructed;
    std::vector<LocalSolution> locals;
    std::map<int, int> adjust_signs;      // theta -> +-1
    double m0 = 0.0;
    std::vector<double> stability_norms;  // per group, SampleSet order
    ReconstructionMetrics metrics;
};

ReconstructionReport reconstruct(const NoisySamples& z, const SampleSet& gamma,
                                 const ReconstructOptions& options = {});

/// Max over the dense evaluation grid of ||g(x)| - |f(x)||.
double magnitude_sup_error(const Signal& f, const Signal& g);

}  // namespace fri
