// Command-line front end: signal generation, phaseless sampling, analysis,
// frame certification, reconstruction, experiment sweeps, and benchmarks.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fri/errors.hpp"
#include "fri/experiment.hpp"
#include "fri/json_io.hpp"
#include "fri/maps.hpp"
#include "fri/rng.hpp"
#include "fri/structure.hpp"

namespace {

using nlohmann::json;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("FRI_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

fri::SamplingStrategy parse_strategy(const std::string& name, int k) {
    if (name == "uniform") return fri::SamplingStrategy::uniform(k);
    if (name == "random") return fri::SamplingStrategy::random(k);
    if (name == "minimal") return fri::SamplingStrategy::minimal(k);
    throw fri::InputError("unknown strategy: " + name);
}

std::string samples_csv(const fri::SampleSet& gamma, const fri::NoisySamples& z) {
    std::string out = "# fri-samples v1\n";
    out += "# eta_inf," + fmt17(z.noise_bound) + "\n";
    out += gamma.model().dim() == 1 ? "theta,gamma_x,z\n" : "theta,gamma_x,gamma_y,z\n";
    for (std::size_t gi = 0; gi < gamma.groups().size(); ++gi) {
        const auto& g = gamma.groups()[gi];
        for (int i = 0; i < g.size(); ++i) {
            out += std::to_string(g.theta) + "," + fmt17(g.points[static_cast<std::size_t>(i)].x);
            if (gamma.model().dim() == 2)
                out += "," + fmt17(g.points[static_cast<std::size_t>(i)].y);
            out += "," + fmt17(z.values[gi](i)) + "\n";
        }
    }
    return out;
}

struct LoadedSamples {
    fri::SampleSet gamma;
    fri::NoisySamples z;
};

// Rebuild a sample set and its magnitude samples from a samples CSV; frames
// are re-evaluated from the model.
LoadedSamples load_samples_csv(const std::string& text,
                               std::shared_ptr<const fri::GeneratorModel> model) {
    std::map<int, std::vector<fri::DomainPoint>> points;
    std::map<int, std::vector<double>> zs;
    double eta_inf = 0.0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# eta_inf,", 0) == 0) {
            eta_inf = std::strtod(line.c_str() + 10, nullptr);
            continue;
        }
        if (line[0] == '#' || line.rfind("theta", 0) == 0) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> vals;
        while (std::getline(row, field, ',')) vals.push_back(std::strtod(field.c_str(), nullptr));
        const int expected = model->dim() == 1 ? 3 : 4;
        if (static_cast<int>(vals.size()) != expected)
            throw fri::InputError("samples CSV row has wrong column count");
        const int theta = static_cast<int>(vals[0]);
        const fri::DomainPoint p = model->dim() == 1
                                       ? fri::DomainPoint::interval(vals[1])
                                       : fri::DomainPoint::plane(vals[1], vals[2]);
        points[theta].push_back(p);
        zs[theta].push_back(vals.back());
    }

    std::vector<fri::SampleGroup> groups;
    std::vector<Eigen::VectorXd> values;
    for (const auto& [theta, pts] : points) {
        fri::SampleGroup g;
        g.theta = theta;
        g.active = model->active_indices(theta);
        g.points = pts;
        g.frame.resize(static_cast<int>(pts.size()), static_cast<int>(g.active.size()));
        for (int m = 0; m < g.frame.rows(); ++m)
            for (int j = 0; j < g.frame.cols(); ++j)
                g.frame(m, j) = model->eval_basis(g.active[static_cast<std::size_t>(j)],
                                                  pts[static_cast<std::size_t>(m)]);
        fri::FrameMatrix fm;
        fm.vectors = g.frame;
        g.stability = fri::stability_norm(fm);
        groups.push_back(std::move(g));
        Eigen::VectorXd zv(static_cast<int>(zs[theta].size()));
        for (int i = 0; i < zv.size(); ++i) zv(i) = zs[theta][static_cast<std::size_t>(i)];
        values.push_back(std::move(zv));
    }
    fri::SampleSet gamma(std::move(model), std::move(groups),
                         fri::SamplingStrategy::uniform(7));
    fri::NoisySamples z;
    z.values = std::move(values);
    z.noise_bound = eta_inf;
    return {std::move(gamma), std::move(z)};
}

json class_size_json(const fri::ClassSize& s) {
    if (s.exact) return json(s.count);
    return json{{"exponent", s.exponent}};
}

int run(int argc, char** argv) {
    CLI::App app{"Phaseless sampling and sign-ambiguous reconstruction of FRI signals"};
    app.require_subcommand(1);

    // gen-signal ------------------------------------------------------------
    auto* gen = app.add_subcommand("gen-signal", "generate a seeded random signal");
    std::string gen_family = "spline";
    int gen_n = 100, gen_rows = 8, gen_cols = 8;
    double gen_a = 0.0, gen_b = 100.0, gen_jitter = 0.2, gen_cell = 1.0;
    std::uint64_t gen_seed = default_seed();
    std::string gen_out;
    gen->add_option("--family", gen_family, "spline|triangulation");
    gen->add_option("--N", gen_n, "knot intervals (spline)");
    gen->add_option("--a", gen_a);
    gen->add_option("--b", gen_b);
    gen->add_option("--jitter", gen_jitter, "knot jitter amplitude");
    gen->add_option("--rows", gen_rows, "mesh rows (triangulation)");
    gen->add_option("--cols", gen_cols, "mesh cols (triangulation)");
    gen->add_option("--cell", gen_cell, "mesh cell size");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--out", gen_out, "output JSON path (default stdout)");

    // sample ----------------------------------------------------------------
    auto* sample = app.add_subcommand("sample", "build a sampling set and take noisy samples");
    std::string sample_signal, sample_strategy = "uniform", sample_out;
    int sample_k = 9;
    double sample_eta = 0.0;
    std::uint64_t sample_seed = default_seed();
    sample->add_option("--signal", sample_signal, "signal JSON")->required();
    sample->add_option("--strategy", sample_strategy, "uniform|random|minimal");
    sample->add_option("--K", sample_k, "points per piece (pool size for minimal)");
    sample->add_option("--eta", sample_eta, "noise level");
    sample->add_option("--seed", sample_seed);
    sample->add_option("--out", sample_out, "output CSV path (default stdout)");

    // reconstruct -------------------------------------------------------------
    auto* rec = app.add_subcommand("reconstruct", "run the reconstruction pipeline");
    std::string rec_model, rec_samples, rec_truth, rec_out;
    double rec_eta = -1.0, rec_m0 = -1.0;
    rec->add_option("--model", rec_model, "model JSON")->required();
    rec->add_option("--samples", rec_samples, "samples CSV")->required();
    rec->add_option("--truth", rec_truth, "truth signal JSON (optional)");
    rec->add_option("--eta-bound", rec_eta, "noise bound override");
    rec->add_option("--m0-override", rec_m0, "phase adjustment threshold override");
    rec->add_option("--out", rec_out, "output directory");

    // analyze -----------------------------------------------------------------
    auto* ana = app.add_subcommand("analyze", "support graph, islands, equivalence class");
    std::string ana_signal, ana_out;
    ana->add_option("--signal", ana_signal, "signal JSON")->required();
    ana->add_option("--out", ana_out, "report JSON path (default stdout)");

    // certify-frame -------------------------------------------------------------
    auto* cert = app.add_subcommand("certify-frame", "phase retrievability of a frame");
    std::string cert_frame;
    double cert_tol = fri::kDefaultRankTol;
    cert->add_option("--frame", cert_frame, "CSV of frame rows")->required();
    cert->add_option("--rank-tol", cert_tol);

    // experiment -----------------------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "seeded Monte-Carlo sweep");
    std::string exp_family = "spline", exp_out = "results.csv", exp_strategy = "uniform";
    std::vector<double> exp_etas{0.01};
    std::vector<int> exp_ks{9};
    int exp_trials = 200, exp_n = 100, exp_rows = 8, exp_cols = 8, exp_threads = 0;
    std::uint64_t exp_seed = default_seed();
    exp->add_option("--family", exp_family, "spline|triangulation");
    exp->add_option("--etas", exp_etas, "noise levels")->delimiter(',');
    exp->add_option("--Ks", exp_ks, "oversampling rates")->delimiter(',');
    exp->add_option("--trials", exp_trials);
    exp->add_option("--N", exp_n, "knot intervals (spline)");
    exp->add_option("--rows", exp_rows);
    exp->add_option("--cols", exp_cols);
    exp->add_option("--strategy", exp_strategy);
    exp->add_option("--threads", exp_threads);
    exp->add_option("--seed", exp_seed);
    exp->add_option("--out", exp_out, "results CSV path");

    // bench ------------------------------------------------------------------
    auto* ben = app.add_subcommand("bench", "reconstruction wall-times across sizes");
    std::vector<int> ben_sizes{50, 100, 200, 400};
    int ben_reps = 3, ben_k = 9;
    double ben_eta = 0.01;
    std::uint64_t ben_seed = default_seed();
    ben->add_option("--sizes", ben_sizes)->delimiter(',');
    ben->add_option("--repeats", ben_reps);
    ben->add_option("--K", ben_k);
    ben->add_option("--eta", ben_eta);
    ben->add_option("--seed", ben_seed);

    CLI11_PARSE(app, argc, argv);

    auto emit = [](const std::string& path, const std::string& content) {
        if (path.empty())
            std::cout << content;
        else
            fri::write_file(path, content);
    };

    if (gen->parsed()) {
        fri::ExperimentSpec spec;
        spec.family = gen_family == "spline" ? fri::ExperimentSpec::Family::Spline
                                             : fri::ExperimentSpec::Family::Triangulation;
        spec.spline_n = gen_n;
        spec.a = gen_a;
        spec.b = gen_b;
        spec.knot_jitter = gen_jitter;
        spec.mesh_rows = gen_rows;
        spec.mesh_cols = gen_cols;
        spec.mesh_cell = gen_cell;
        const fri::Signal f = fri::gen_random_signal(spec, gen_seed);
        emit(gen_out, fri::signal_to_json(f) + "\n");
        return 0;
    }

    if (sample->parsed()) {
        const fri::Signal f = fri::signal_from_json(fri::read_file(sample_signal));
        const auto gamma = fri::build_sampling_set(
            f.model_ptr(), parse_strategy(sample_strategy, sample_k), sample_seed);
        const auto z = fri::take_samples(f, gamma, sample_eta, sample_seed);
        emit(sample_out, samples_csv(gamma, z));
        return 0;
    }

    if (rec->parsed()) {
        auto model = fri::model_from_json(fri::read_file(rec_model));
        auto loaded = load_samples_csv(fri::read_file(rec_samples), model);
        fri::ReconstructOptions opt;
        if (!rec_truth.empty())
            opt.truth = fri::signal_from_json(fri::read_file(rec_truth), model);
        if (rec_eta >= 0.0) opt.eta_bound = rec_eta;
        if (rec_m0 >= 0.0) opt.m0_override = rec_m0;
        const auto rep = fri::reconstruct(loaded.z, loaded.gamma, opt);

        json out;
        out["m0"] = rep.m0;
        out["signal"] = json::parse(fri::signal_to_json(rep.reconstructed));
        out["metrics"] = {{"bound_value", rep.metrics.bound_value},
                          {"eta_inf", rep.metrics.eta_inf},
                          {"runtime_s", rep.metrics.runtime_seconds}};
        if (rep.metrics.sup_err) out["metrics"]["sup_err"] = *rep.metrics.sup_err;
        json signs = json::object();
        for (const auto& [theta, s] : rep.adjust_signs) signs[std::to_string(theta)] = s;
        out["adjust_signs"] = std::move(signs);

        if (rec_out.empty()) {
            std::cout << out.dump(2) << "\n";
        } else {
            std::filesystem::create_directories(rec_out);
            fri::write_file(rec_out + "/reconstruction.json", out.dump(2) + "\n");
            const std::string metrics_path = rec_out + "/metrics.csv";
            std::string csv;
            if (!std::filesystem::exists(metrics_path))
                csv = "eta_inf,m0,sup_err,bound_value,runtime_s\n";
            csv += fmt17(rep.metrics.eta_inf) + "," + fmt17(rep.m0) + "," +
                   (rep.metrics.sup_err ? fmt17(*rep.metrics.sup_err) : "") + "," +
                   fmt17(rep.metrics.bound_value) + "," + fmt17(rep.metrics.runtime_seconds) + "\n";
            std::ofstream app_out(metrics_path, std::ios::app);
            app_out << csv;
            std::cout << "wrote " << rec_out << "/reconstruction.json\n";
        }
        return 0;
    }

    if (ana->parsed()) {
        const fri::Signal f = fri::signal_from_json(fri::read_file(ana_signal));
        const auto graph = fri::build_graph(f);
        const auto islands = fri::decompose_islands(f);
        json out;
        out["connected"] = graph.vertices.empty() ? false : graph.connected();
        out["vertices"] = graph.vertices;
        out["islands"] = islands.islands;
        out["class_size"] = class_size_json(fri::equivalence_class_size(f));
        if (!graph.vertices.empty()) {
            const auto rep = fri::check_nonseparable(f);
            out["nonseparable"] = rep.nonseparable;
            if (!rep.nonseparable)
                out["witness_split"] = {rep.witness_part, rep.witness_rest};
        }
        emit(ana_out, out.dump(2) + "\n");
        return 0;
    }

    if (cert->parsed()) {
        std::istringstream in(fri::read_file(cert_frame));
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream row(line);
            std::string field;
            std::vector<double> vals;
            while (std::getline(row, field, ',')) vals.push_back(std::strtod(field.c_str(), nullptr));
            if (!vals.empty()) rows.push_back(std::move(vals));
        }
        if (rows.empty()) throw fri::InputError("empty frame CSV");
        fri::FrameMatrix f;
        f.vectors.resize(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size())
                throw fri::InputError("ragged frame CSV");
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                f.vectors(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
        }
        const auto stab = fri::stability_report(f);
        json out;
        out["pr"] = fri::is_phase_retrievable_frame(f, cert_tol);
        out["minimal"] = fri::is_minimal_pr_frame(f, cert_tol);
        out["stability_norm"] = stab.norm;
        out["worst_split"] = {stab.worst.subset, stab.worst.complement};
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    if (exp->parsed()) {
        fri::ExperimentSpec spec;
        spec.family = exp_family == "spline" ? fri::ExperimentSpec::Family::Spline
                                             : fri::ExperimentSpec::Family::Triangulation;
        spec.etas = exp_etas;
        spec.ks = exp_ks;
        spec.trials = exp_trials;
        spec.spline_n = exp_n;
        spec.mesh_rows = exp_rows;
        spec.mesh_cols = exp_cols;
        spec.seed = exp_seed;
        spec.threads = exp_threads;
        spec.strategy = parse_strategy(exp_strategy, exp_ks.empty() ? 9 : exp_ks.front()).kind;
        const auto table = fri::run_experiment(spec);
        fri::write_file(exp_out, table.to_csv());
        for (const auto& a : table.aggregates)
            std::cout << "eta=" << a.eta << " K=" << a.k << " mean=" << a.mean_sup_err
                      << " max=" << a.max_sup_err << " ok=" << a.ok_trials
                      << " failed=" << a.failed_trials << "\n";
        std::cout << "wrote " << exp_out << "\n";
        return 0;
    }

    if (ben->parsed()) {
        fri::ExperimentSpec spec;
        spec.etas = {ben_eta};
        spec.ks = {ben_k};
        spec.seed = ben_seed;
        const auto rep = fri::bench(spec, ben_sizes, ben_reps);
        std::cout << rep.to_csv();
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
