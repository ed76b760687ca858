#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fri/maps.hpp"
#include "fri/sampling.hpp"

namespace fri {

/// A seeded Monte-Carlo sweep: random signals, noisy phaseless samples,
/// reconstruction, and per-cell error statistics.
struct ExperimentSpec {
    enum class Family { Spline, Triangulation };

    Family family = Family::Spline;

    // Spline instances: jittered knots t_n = a + (n + eps_n)(b-a)/N on [a, b].
    int spline_n = 100;
    double a = 0.0;
    double b = 100.0;
    double knot_jitter = 0.2;  // eps_n uniform on [-jitter, jitter]

    // Triangulation instances: structured right-triangle mesh, nodal values
    // uniform on [-1, 1].
    int mesh_rows = 8;
    int mesh_cols = 8;
    double mesh_cell = 1.0;

    std::vector<double> etas{0.01};
    std::vector<int> ks{9};  // samples per knot interval / per triangle
    int trials = 200;
    std::uint64_t seed = 0;
    SamplingStrategy::Kind strategy = SamplingStrategy::Kind::Uniform;
    int threads = 0;  // 0: hardware concurrency

    void validate() const;
};

struct TrialRow {
    double eta = 0.0;
    int k = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string status;  // "ok" or "failed:<reason>"
    double sup_err = 0.0;
    double bound_value = 0.0;
    int islands = 0;  // islands of the generated truth
    double runtime = 0.0;
};

struct CellAggregate {
    double eta = 0.0;
    int k = 0;
    int ok_trials = 0;
    int failed_trials = 0;
    double mean_sup_err = 0.0;
    double max_sup_err = 0.0;
};

struct ResultsTable {
    std::vector<TrialRow> rows;
    std::vector<CellAggregate> aggregates;

    // Versioned CSV, floats at 17 significant digits.  All columns except the
    // wall-clock runtime are byte-reproducible for a fixed spec; pass false to
    // drop that column and get fully deterministic output.
    std::string to_csv(bool include_runtime = true) const;
    static CellAggregate aggregate_of(const std::vector<TrialRow>& rows, double eta, int k);
};

/// One random instance: jittered-knot spline with uniform [-1,1] coefficients,
/// or fixed structured mesh with uniform [-1,1] nodal values.
Signal gen_random_signal(const ExperimentSpec& spec, std::uint64_t seed);

ResultsTable run_experiment(const ExperimentSpec& spec);

/// Grid-level magnitude comparison backing the symbolic class decision.
bool oracle_equivalence_check(const Signal& f, const Signal& g, double tol = 1e-9);

struct BenchReport {
    std::vector<int> sizes;
    std::vector<double> reconstruct_seconds;
    std::vector<double> local_seconds;
    std::vector<double> adjust_seconds;
    std::vector<double> sew_seconds;
    double fitted_exponent = 0.0;  // slope of log time against log size

    std::string to_csv() const;
};

/// Reconstruction wall-times across domain sizes; near-linear growth expected.
BenchReport bench(const ExperimentSpec& spec, const std::vector<int>& sizes = {50, 100, 200, 400},
                  int repeats = 3);

}  // namespace fri
