#include "fri/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "fri/errors.hpp"
#include "fri/rng.hpp"
#include "fri/structure.hpp"

namespace fri {

void ExperimentSpec::validate() const {
    if (trials < 1) throw InputError("experiment needs at least one trial");
    for (double eta : etas)
        if (eta < 0.0) throw InputError("noise levels must be nonnegative");
    if (family == Family::Spline) {
        for (int k : ks)
            if (k < 7) throw InputError("spline oversampling requires K >= 7");
        if (spline_n < 5) throw InputError("spline model needs N >= 5");
        if (!(b > a)) throw InputError("domain must satisfy a < b");
        if (!(knot_jitter >= 0.0 && knot_jitter < 0.5))
            throw InputError("knot jitter must lie in [0, 0.5)");
    } else {
        for (int k : ks)
            if (k < 5) throw InputError("triangle pools need at least 2*3-1 = 5 points");
        if (mesh_rows < 2 || mesh_cols < 2)
            throw InputError("structured mesh needs inner nodes (rows, cols >= 2)");
    }
}

Signal gen_random_signal(const ExperimentSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    if (spec.family == ExperimentSpec::Family::Spline) {
        const int n = spec.spline_n;
        // Knots first, then coefficients; the draw order is part of the
        // reproducibility contract.
        std::vector<double> knots(static_cast<std::size_t>(n) + 1);
        knots[0] = spec.a;
        knots[static_cast<std::size_t>(n)] = spec.b;
        const double h = (spec.b - spec.a) / n;
        for (int i = 1; i < n; ++i) {
            const double eps = rng.uniform(-spec.knot_jitter, spec.knot_jitter);
            knots[static_cast<std::size_t>(i)] = spec.a + (i + eps) * h;
        }
        auto model = std::make_shared<GeneratorModel>(SplineModel(std::move(knots)));
        std::map<Index, double> coeffs;
        for (Index lambda : model->innovation_ids()) coeffs[lambda] = rng.uniform(-1.0, 1.0);
        return Signal(std::move(model), std::move(coeffs));
    }
    auto model = std::make_shared<GeneratorModel>(
        TriangulationModel::structured(spec.mesh_rows, spec.mesh_cols, spec.mesh_cell));
    std::map<Index, double> coeffs;
    for (Index lambda : model->innovation_ids()) coeffs[lambda] = rng.uniform(-1.0, 1.0);
    return Signal(std::move(model), std::move(coeffs));
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

TrialRow run_trial(const ExperimentSpec& spec, double eta, int k, int trial,
                   std::uint64_t trial_root) {
    TrialRow row;
    row.eta = eta;
    row.k = k;
    row.trial = trial;
    row.seed = trial_root;
    try {
        const Signal truth = gen_random_signal(spec, Rng::derive(trial_root, 0).next_u64());
        const SamplingStrategy strategy{spec.strategy, k};
        const SampleSet gamma =
            build_sampling_set(truth.model_ptr(), strategy, Rng::derive(trial_root, 1).next_u64());
        const NoisySamples z = take_samples(truth, gamma, eta, Rng::derive(trial_root, 2).next_u64());
        ReconstructOptions opt;
        opt.truth = truth;
        const ReconstructionReport rep = reconstruct(z, gamma, opt);
        row.status = "ok";
        row.sup_err = *rep.metrics.sup_err;
        row.bound_value = rep.metrics.bound_value;
        row.islands = static_cast<int>(decompose_islands(truth).size());
        row.runtime = rep.metrics.runtime_seconds;
    } catch (const std::exception& e) {
        row.status = std::string("failed:") + e.what();
        row.sup_err = std::nan("");
        row.bound_value = std::nan("");
    }
    return row;
}

}  // namespace

CellAggregate ResultsTable::aggregate_of(const std::vector<TrialRow>& rows, double eta, int k) {
    CellAggregate agg;
    agg.eta = eta;
    agg.k = k;
    double sum = 0.0;
    for (const auto& r : rows) {
        if (r.eta != eta || r.k != k) continue;
        if (r.status == "ok") {
            agg.ok_trials += 1;
            sum += r.sup_err;
            agg.max_sup_err = std::max(agg.max_sup_err, r.sup_err);
        } else {
            agg.failed_trials += 1;
        }
    }
    agg.mean_sup_err = agg.ok_trials > 0 ? sum / agg.ok_trials : 0.0;
    return agg;
}

ResultsTable run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ResultsTable table;
    const int cells = static_cast<int>(spec.etas.size() * spec.ks.size());
    table.rows.resize(static_cast<std::size_t>(cells) * spec.trials);

    // Trials draw from streams derived by a global counter, so results do not
    // depend on the parallel schedule.
    std::vector<std::uint64_t> roots(table.rows.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
        roots[i] = spec.seed ^ splitmix64(0x9E3779B97F4A7C15ULL + i);

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers = std::max(1, spec.threads > 0 ? spec.threads : hw);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= table.rows.size()) break;
            const int cell = static_cast<int>(i) / spec.trials;
            const int trial = static_cast<int>(i) % spec.trials;
            const double eta = spec.etas[static_cast<std::size_t>(cell) / spec.ks.size()];
            const int k = spec.ks[static_cast<std::size_t>(cell) % spec.ks.size()];
            table.rows[i] = run_trial(spec, eta, k, trial, roots[i]);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (double eta : spec.etas)
        for (int k : spec.ks)
            table.aggregates.push_back(ResultsTable::aggregate_of(table.rows, eta, k));
    return table;
}

std::string ResultsTable::to_csv(bool include_runtime) const {
    std::string out = "# fri-results v1\n";
    out += include_runtime ? "eta,K,trial,seed,status,sup_err,bound_value,islands,runtime_s\n"
                           : "eta,K,trial,seed,status,sup_err,bound_value,islands\n";
    for (const auto& r : rows) {
        out += fmt17(r.eta) + "," + std::to_string(r.k) + "," + std::to_string(r.trial) + "," +
               std::to_string(r.seed) + "," + r.status + "," + fmt17(r.sup_err) + "," +
               fmt17(r.bound_value) + "," + std::to_string(r.islands);
        if (include_runtime) out += "," + fmt17(r.runtime);
        out += "\n";
    }
    out += "# aggregates\n";
    out += "eta,K,ok_trials,failed_trials,mean_sup_err,max_sup_err\n";
    for (const auto& a : aggregates) {
        out += fmt17(a.eta) + "," + std::to_string(a.k) + "," + std::to_string(a.ok_trials) + "," +
               std::to_string(a.failed_trials) + "," + fmt17(a.mean_sup_err) + "," +
               fmt17(a.max_sup_err) + "\n";
    }
    return out;
}

bool oracle_equivalence_check(const Signal& f, const Signal& g, double tol) {
    return magnitude_sup_error(f, g) < tol;
}

BenchReport bench(const ExperimentSpec& spec, const std::vector<int>& sizes, int repeats) {
    spec.validate();
    if (sizes.size() < 2) throw InputError("bench needs at least two sizes");
    BenchReport rep;
    rep.sizes = sizes;
    const double eta = spec.etas.empty() ? 0.01 : spec.etas.front();
    const int k = spec.ks.empty() ? 9 : spec.ks.front();

    for (std::size_t si = 0; si < sizes.size(); ++si) {
        ExperimentSpec inst = spec;
        if (spec.family == ExperimentSpec::Family::Spline) {
            inst.spline_n = sizes[si];
            inst.b = spec.a + sizes[si] * (spec.b - spec.a) / spec.spline_n;  // keep unit knot scale
        } else {
            inst.mesh_rows = sizes[si];
        }
        double best = std::numeric_limits<double>::infinity();
        double tl = 0.0, ta = 0.0, ts = 0.0;
        for (int r = 0; r < repeats; ++r) {
            const std::uint64_t root = spec.seed ^ splitmix64(0xBE5C + si * 131 + r);
            const Signal truth = gen_random_signal(inst, Rng::derive(root, 0).next_u64());
            const SampleSet gamma = build_sampling_set(truth.model_ptr(), {spec.strategy, k},
                                                       Rng::derive(root, 1).next_u64());
            const NoisySamples z = take_samples(truth, gamma, eta, Rng::derive(root, 2).next_u64());
            ReconstructOptions opt;
            opt.truth = truth;
            const ReconstructionReport out = reconstruct(z, gamma, opt);
            if (out.metrics.runtime_seconds < best) {
                best = out.metrics.runtime_seconds;
                tl = out.metrics.t_local;
                ta = out.metrics.t_adjust;
                ts = out.metrics.t_sew;
            }
        }
        rep.reconstruct_seconds.push_back(best);
        rep.local_seconds.push_back(tl);
        rep.adjust_seconds.push_back(ta);
        rep.sew_seconds.push_back(ts);
    }

    // Least-squares slope of log t against log N.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const double x = std::log(static_cast<double>(sizes[i]));
        const double y = std::log(rep.reconstruct_seconds[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

std::string BenchReport::to_csv() const {
    std::string out = "# fri-bench v1\n";
    out += "N,reconstruct_s,local_s,adjust_s,sew_s\n";
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        out += std::to_string(sizes[i]) + "," + fmt17(reconstruct_seconds[i]) + "," +
               fmt17(local_seconds[i]) + "," + fmt17(adjust_seconds[i]) + "," +
               fmt17(sew_seconds[i]) + "\n";
    }
    out += "# fitted_exponent," + fmt17(fitted_exponent) + "\n";
    return out;
}

}  // namespace fri
