#include "fri/maps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>

#include "fri/errors.hpp"

namespace fri {

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
}

}  // namespace

LocalSolution solve_local(const SampleGroup& group, const Eigen::VectorXd& z) {
    const int m = group.size();
    const int n = static_cast<int>(group.active.size());
    if (static_cast<int>(z.size()) != m) throw InputError("sample vector length mismatch");
    if (m > kMaxLocalSamples)
        throw CapacityError("sign enumeration refused for more than 20 samples per piece", m);
    if (m < n || !has_full_column_rank(group.frame))
        throw CertificationError("rank-deficient design matrix on piece " +
                                 std::to_string(group.theta) +
                                 " contradicts local linear independence");

    // One QR factorization serves every sign pattern: the residual of
    // min ||A d - v|| is ||v||^2 - ||Q^T v||^2 with A = QR thin.
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(group.frame);
    const Eigen::MatrixXd q_thin =
        qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
    const double z_norm2 = z.squaredNorm();

    const std::uint64_t patterns = 1ULL << (m - 1);
    Eigen::VectorXd signs = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd best_signs = signs;
    double best_residual = std::numeric_limits<double>::infinity();
    Eigen::VectorXd v(m);
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        for (int i = 1; i < m; ++i) signs(i) = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
        v = signs.cwiseProduct(z);
        const double fit = (q_thin.transpose() * v).squaredNorm();
        const double residual = std::max(0.0, z_norm2 - fit);
        if (residual < best_residual ||
            (residual == best_residual && lex_less(signs, best_signs))) {
            best_residual = residual;
            best_signs = signs;
        }
    }

    LocalSolution sol;
    sol.theta = group.theta;
    sol.active = group.active;
    sol.signs = best_signs;
    sol.coeffs = qr.solve(best_signs.cwiseProduct(z));
    sol.residual = (group.frame * sol.coeffs - best_signs.cwiseProduct(z)).squaredNorm();
    return sol;
}

double compute_threshold(const SampleSet& gamma, double eta_inf) {
    if (eta_inf < 0.0) throw InputError("noise bound must be nonnegative");
    if (gamma.groups().empty()) throw InputError("empty sampling set");
    double worst = 0.0;
    for (const auto& g : gamma.groups()) {
        if (g.stability <= 1e-10)
            throw CertificationError("group frame on piece " + std::to_string(g.theta) +
                                     " not phase retrievable");
        worst = std::max(worst, g.size() / (g.stability * g.stability));
    }
    return 24.0 * worst * eta_inf * eta_inf;
}

std::vector<int> adjust_phases(const std::vector<LocalSolution>& locals, double m0) {
    if (m0 < 0.0) throw InputError("threshold must be nonnegative");
    const int p = static_cast<int>(locals.size());

    // Pairs with common active positions, their inner products over the overlap.
    std::map<Index, std::vector<int>> by_position;
    for (int i = 0; i < p; ++i)
        for (Index lambda : locals[static_cast<std::size_t>(i)].active)
            by_position[lambda].push_back(i);

    std::map<std::pair<int, int>, double> inner;
    for (const auto& [lambda, owners] : by_position) {
        (void)lambda;
        for (std::size_t a = 0; a < owners.size(); ++a)
            for (std::size_t b = a + 1; b < owners.size(); ++b)
                inner[{owners[a], owners[b]}] = 0.0;
    }
    for (auto& [pair, value] : inner) {
        const LocalSolution& la = locals[static_cast<std::size_t>(pair.first)];
        const LocalSolution& lb = locals[static_cast<std::size_t>(pair.second)];
        double ip = 0.0;
        for (std::size_t i = 0; i < la.active.size(); ++i) {
            const auto it = std::lower_bound(lb.active.begin(), lb.active.end(), la.active[i]);
            if (it != lb.active.end() && *it == la.active[i])
                ip += la.coeffs(static_cast<int>(i)) *
                      lb.coeffs(static_cast<int>(it - lb.active.begin()));
        }
        value = ip;
    }

    // Strong-overlap edges carry a relative sign; propagate breadth-first over
    // a spanning forest rooted at the lowest piece of each component.
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(p));
    for (const auto& [pair, ip] : inner) {
        if (std::abs(ip) > m0) {
            const int rel = ip > 0.0 ? 1 : -1;
            adj[static_cast<std::size_t>(pair.first)].push_back({pair.second, rel});
            adj[static_cast<std::size_t>(pair.second)].push_back({pair.first, rel});
        }
    }
    std::vector<int> sign(static_cast<std::size_t>(p), 0);
    std::vector<int> parent(static_cast<std::size_t>(p), -1);
    for (int root = 0; root < p; ++root) {
        if (sign[static_cast<std::size_t>(root)] != 0) continue;
        sign[static_cast<std::size_t>(root)] = 1;
        std::deque<int> queue{root};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (const auto& [w, rel] : adj[static_cast<std::size_t>(u)]) {
                const int implied = sign[static_cast<std::size_t>(u)] * rel;
                if (sign[static_cast<std::size_t>(w)] == 0) {
                    sign[static_cast<std::size_t>(w)] = implied;
                    parent[static_cast<std::size_t>(w)] = u;
                    queue.push_back(w);
                } else if (sign[static_cast<std::size_t>(w)] != implied) {
                    // Odd cycle: tree path u -> w plus the conflicting edge.
                    std::vector<int> path_u{u}, path_w{w};
                    while (path_u.back() != root) path_u.push_back(parent[static_cast<std::size_t>(path_u.back())]);
                    while (path_w.back() != root) path_w.push_back(parent[static_cast<std::size_t>(path_w.back())]);
                    while (path_u.size() > 1 && path_w.size() > 1 &&
                           path_u[path_u.size() - 2] == path_w[path_w.size() - 2]) {
                        path_u.pop_back();
                        path_w.pop_back();
                    }
                    std::vector<int> cycle(path_u.begin(), path_u.end());
                    for (auto it = path_w.rbegin() + 1; it != path_w.rend(); ++it) cycle.push_back(*it);
                    std::vector<int> cycle_thetas;
                    for (int idx : cycle)
                        cycle_thetas.push_back(locals[static_cast<std::size_t>(idx)].theta);
                    throw ReconstructionError(
                        "phase adjustment infeasible: odd-signed cycle among pieces; "
                        "noise exceeds the adjustable regime",
                        cycle_thetas);
                }
            }
        }
    }

    // Verify every pairwise constraint.
    for (const auto& [pair, ip] : inner) {
        const double adjusted = sign[static_cast<std::size_t>(pair.first)] *
                                sign[static_cast<std::size_t>(pair.second)] * ip;
        if (adjusted < -m0) {
            throw ReconstructionError(
                "phase adjustment infeasible: pair violates the inner-product bound",
                {locals[static_cast<std::size_t>(pair.first)].theta,
                 locals[static_cast<std::size_t>(pair.second)].theta});
        }
    }
    return sign;
}

Signal sew(const std::vector<LocalSolution>& locals, const std::vector<int>& signs,
           std::shared_ptr<const GeneratorModel> model) {
    if (signs.size() != locals.size()) throw InputError("one sign per local solution required");
    std::map<Index, double> sum;
    std::map<Index, int> count;
    for (std::size_t i = 0; i < locals.size(); ++i) {
        const LocalSolution& l = locals[i];
        for (std::size_t j = 0; j < l.active.size(); ++j) {
            sum[l.active[j]] += signs[i] * l.coeffs(static_cast<int>(j));
            count[l.active[j]] += 1;
        }
    }
    for (Index lambda : model->innovation_ids()) {
        if (count.find(lambda) == count.end())
            throw ModelConsistencyError("innovation position " + std::to_string(lambda) +
                                        " is active on no sampled piece");
    }
    std::map<Index, double> coeffs;
    for (const auto& [lambda, s] : sum) coeffs[lambda] = s / count[lambda];
    return Signal(std::move(model), std::move(coeffs));
}

double magnitude_sup_error(const Signal& f, const Signal& g) {
    if (f.model_ptr() != g.model_ptr()) throw InputError("signals use different models");
    double worst = 0.0;
    for (const auto& p : evaluation_grid(f.model()))
        worst = std::max(worst, std::abs(std::abs(eval_at(g, p)) - std::abs(eval_at(f, p))));
    return worst;
}

ReconstructionReport reconstruct(const NoisySamples& z, const SampleSet& gamma,
                                 const ReconstructOptions& options) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    if (z.values.size() != gamma.groups().size())
        throw InputError("samples and sampling set have different group counts");

    const double eta_inf = options.eta_bound.value_or(z.noise_bound);
    const double m0 = options.m0_override.value_or(compute_threshold(gamma, eta_inf));

    ReconstructionReport rep{Signal(gamma.model_ptr(), {}), {}, {}, m0, {}, {}};
    for (const auto& g : gamma.groups()) rep.stability_norms.push_back(g.stability);

    const auto t1 = clock::now();
    for (std::size_t i = 0; i < gamma.groups().size(); ++i)
        rep.locals.push_back(solve_local(gamma.groups()[i], z.values[i]));
    const auto t2 = clock::now();

    const std::vector<int> signs = adjust_phases(rep.locals, m0);
    for (std::size_t i = 0; i < rep.locals.size(); ++i)
        rep.adjust_signs[rep.locals[i].theta] = signs[i];
    const auto t3 = clock::now();

    rep.reconstructed = sew(rep.locals, signs, gamma.model_ptr());
    const auto t4 = clock::now();

    const GeneratorModel& model = gamma.model();
    double worst_factor = 0.0;
    for (const auto& g : gamma.groups())
        worst_factor = std::max(worst_factor, std::sqrt(static_cast<double>(g.size())) / g.stability);
    rep.metrics.max_group_factor = worst_factor;
    rep.metrics.covering_r0 = covering_count(model, model.support_radius());
    rep.metrics.generator_sup = model.sup_norm();
    rep.metrics.eta_inf = eta_inf;
    rep.metrics.bound_value = 10.0 * std::sqrt(6.0) * worst_factor * rep.metrics.covering_r0 *
                              rep.metrics.generator_sup * eta_inf;
    if (options.truth)
        rep.metrics.sup_err = magnitude_sup_error(*options.truth, rep.reconstructed);

    const auto t5 = clock::now();
    const auto secs = [](auto a, auto b) {
        return std::chrono::duration<double>(b - a).count();
    };
    rep.metrics.t_local = secs(t1, t2);
    rep.metrics.t_adjust = secs(t2, t3);
    rep.metrics.t_sew = secs(t3, t4);
    rep.metrics.runtime_seconds = secs(t0, t5);
    return rep;
}

}  // namespace fri
