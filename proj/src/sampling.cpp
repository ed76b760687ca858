#include "fri/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fri/errors.hpp"
#include "fri/rng.hpp"

namespace fri {

FrameMatrix SampleGroup::frame_matrix() const {
    FrameMatrix f;
    f.vectors = frame;
    FrameProvenance prov;
    prov.theta = theta;
    prov.points = points;
    f.provenance = prov;
    return f;
}

SampleSet::SampleSet(std::shared_ptr<const GeneratorModel> model, std::vector<SampleGroup> groups,
                     SamplingStrategy strategy)
    : model_(std::move(model)), groups_(std::move(groups)), strategy_(strategy) {
    if (!model_) throw InputError("sample set needs a model");
}

int SampleSet::total_samples() const {
    int n = 0;
    for (const auto& g : groups_) n += g.size();
    return n;
}

std::vector<DomainPoint> SampleSet::all_points() const {
    std::vector<DomainPoint> out;
    out.reserve(static_cast<std::size_t>(total_samples()));
    for (const auto& g : groups_) out.insert(out.end(), g.points.begin(), g.points.end());
    return out;
}

namespace {

// Frame of the active basis at points known to lie inside piece theta.
Eigen::MatrixXd frame_at(const GeneratorModel& model, int theta, const std::vector<Index>& active,
                         const std::vector<DomainPoint>& points) {
    Eigen::MatrixXd f(static_cast<int>(points.size()), static_cast<int>(active.size()));
    if (model.is_spline()) {
        for (int m = 0; m < f.rows(); ++m)
            for (int j = 0; j < f.cols(); ++j)
                f(m, j) = model.spline().eval_basis(active[static_cast<std::size_t>(j)],
                                                    points[static_cast<std::size_t>(m)].x);
        return f;
    }
    const auto& tri = model.triangulation();
    const auto& t = tri.triangles()[static_cast<std::size_t>(theta)];
    for (int m = 0; m < f.rows(); ++m) {
        double bary[3];
        tri.barycentric(theta, points[static_cast<std::size_t>(m)], bary);
        for (int j = 0; j < f.cols(); ++j) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k)
                if (t.v[k] == active[static_cast<std::size_t>(j)]) v = bary[k];
            f(m, j) = v;
        }
    }
    return f;
}

std::vector<DomainPoint> candidate_points(const GeneratorModel& model, int theta, int count,
                                          SamplingStrategy::Kind kind, std::uint64_t seed) {
    std::vector<DomainPoint> pts;
    pts.reserve(static_cast<std::size_t>(count));
    if (model.is_spline() && kind != SamplingStrategy::Kind::Random) {
        // Uniform interior grid t_n + k (t_{n+1} - t_n) / (K + 1), k = 1..K.
        const auto& t = model.spline().knots();
        for (int k = 1; k <= count; ++k)
            pts.push_back(DomainPoint::interval(t[theta] + k * (t[theta + 1] - t[theta]) / (count + 1)));
        return pts;
    }
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(theta));
    for (int k = 0; k < count; ++k) {
        const double u = rng.uniform01();
        const double v = rng.uniform01();
        pts.push_back(model.piece_point(theta, u, v));
    }
    return pts;
}

}  // namespace

SampleSet build_sampling_set(std::shared_ptr<const GeneratorModel> model, SamplingStrategy strategy,
                             std::uint64_t seed) {
    if (!model) throw InputError("sampling needs a model");
    const GeneratorModel& m = *model;
    const int count = strategy.points_per_piece;
    if (count < 1) throw InputError("strategy needs at least one point per piece");
    if (m.is_spline() && strategy.kind == SamplingStrategy::Kind::Uniform && count < 7)
        throw InputError("uniform spline sampling requires K >= 7");

    std::vector<SampleGroup> groups;
    for (int theta = 0; theta < m.num_pieces(); ++theta) {
        std::vector<Index> active = m.active_indices(theta);
        if (active.empty()) continue;  // nothing to determine on this piece
        const int n = static_cast<int>(active.size());
        if (count < 2 * n - 1)
            throw InputError("piece " + std::to_string(theta) + " needs at least " +
                             std::to_string(2 * n - 1) + " candidate points");

        SampleGroup g;
        g.theta = theta;
        g.active = std::move(active);
        g.points = candidate_points(m, theta, count, strategy.kind, seed);

        if (strategy.kind == SamplingStrategy::Kind::Minimal) {
            const Eigen::MatrixXd pool_frame = frame_at(m, theta, g.active, g.points);
            std::vector<std::pair<DomainPoint, Eigen::VectorXd>> pool;
            pool.reserve(g.points.size());
            for (std::size_t i = 0; i < g.points.size(); ++i)
                pool.emplace_back(g.points[i], pool_frame.row(static_cast<int>(i)).transpose());
            FrameMatrix extracted;
            try {
                extracted = extract_minimal_pr_frame(pool);
            } catch (const CertificationError& e) {
                throw CertificationError("piece " + std::to_string(theta) + ": " + e.what());
            }
            g.points = extracted.provenance->points;
            g.frame = extracted.vectors;
            g.minimal = true;
        } else {
            g.frame = frame_at(m, theta, g.active, g.points);
            FrameMatrix fm;
            fm.vectors = g.frame;
            if (!is_phase_retrievable_frame(fm)) {
                auto rep = stability_report(fm);
                std::string split = "{";
                for (std::size_t i = 0; i < rep.worst.subset.size(); ++i)
                    split += (i ? "," : "") + std::to_string(rep.worst.subset[i]);
                throw CertificationError("group frame on piece " + std::to_string(theta) +
                                         " is not phase retrievable (failing split " + split + "})");
            }
        }
        FrameMatrix fm;
        fm.vectors = g.frame;
        g.stability = stability_norm(fm);
        groups.push_back(std::move(g));
    }
    return SampleSet(std::move(model), std::move(groups), strategy);
}

NoisySamples take_samples(const Signal& f, const SampleSet& gamma, double eta, std::uint64_t seed) {
    if (eta < 0.0) throw InputError("noise level must be nonnegative");
    if (f.model_ptr().get() != &gamma.model())
        throw InputError("signal and sample set use different models");
    NoisySamples out;
    out.noise_bound = eta;
    Rng rng = Rng::derive(seed, 0x5A4D);
    for (const auto& g : gamma.groups()) {
        Eigen::VectorXd z(g.size());
        for (int i = 0; i < g.size(); ++i) {
            const double noise = eta > 0.0 ? rng.uniform(-eta, eta) : 0.0;
            z(i) = std::abs(f.eval(g.points[static_cast<std::size_t>(i)])) + noise;
        }
        out.values.push_back(std::move(z));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Density and geometry estimators

namespace {

std::vector<DomainPoint> innovation_positions(const GeneratorModel& model) {
    std::vector<DomainPoint> out;
    out.reserve(model.innovation_ids().size());
    for (Index lambda : model.innovation_ids()) out.push_back(model.anchor(lambda));
    return out;
}

struct BBox {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};

BBox domain_bbox(const GeneratorModel& model) {
    if (model.is_spline()) return {model.spline().a(), model.spline().b(), 0.0, 0.0};
    BBox b{1e300, -1e300, 1e300, -1e300};
    for (const auto& p : model.triangulation().nodes()) {
        b.x0 = std::min(b.x0, p.x);
        b.x1 = std::max(b.x1, p.x);
        b.y0 = std::min(b.y0, p.y);
        b.y1 = std::max(b.y1, p.y);
    }
    return b;
}

int count_within(const std::vector<DomainPoint>& pts, const DomainPoint& center, double r) {
    int c = 0;
    for (const auto& p : pts)
        if (distance(p, center) <= r) ++c;
    return c;
}

}  // namespace

double covering_count(const GeneratorModel& model, double r, int grid_per_dim) {
    if (r < 0.0) throw InputError("radius must be nonnegative");
    const std::vector<DomainPoint> pts = innovation_positions(model);
    if (pts.empty()) return 0.0;

    if (model.is_spline()) {
        // Exact: the maximal window [p_i, p_j] with p_j - p_i <= 2r realizes the
        // supremum with the ball centered at the pair midpoint.
        std::vector<double> xs;
        xs.reserve(pts.size());
        for (const auto& p : pts) xs.push_back(p.x);
        std::sort(xs.begin(), xs.end());
        int best = 1;
        std::size_t j = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (j < i) j = i;
            while (j + 1 < xs.size() && xs[j + 1] - xs[i] <= 2.0 * r) ++j;
            best = std::max(best, static_cast<int>(j - i + 1));
        }
        return best;
    }

    const int g = grid_per_dim > 0 ? grid_per_dim : 160;
    const BBox bb = domain_bbox(model);
    int best = 0;
    for (const auto& p : pts) best = std::max(best, count_within(pts, p, r));
    for (int i = 0; i <= g; ++i) {
        for (int j = 0; j <= g; ++j) {
            const DomainPoint c =
                DomainPoint::plane(bb.x0 + (bb.x1 - bb.x0) * i / g, bb.y0 + (bb.y1 - bb.y0) * j / g);
            best = std::max(best, count_within(pts, c, r));
        }
    }
    return best;
}

int piece_multiplicity(const GeneratorModel& model) {
    // Pieces meeting supp phi_lambda are exactly those with lambda in K_theta.
    std::vector<int> hits(model.innovation_ids().size(), 0);
    for (int theta = 0; theta < model.num_pieces(); ++theta) {
        for (Index lambda : model.active_indices(theta)) {
            const auto& ids = model.innovation_ids();
            const auto it = std::lower_bound(ids.begin(), ids.end(), lambda);
            hits[static_cast<std::size_t>(it - ids.begin())] += 1;
        }
    }
    int best = 0;
    for (int h : hits) best = std::max(best, h);
    return best;
}

double upper_density(const std::vector<DomainPoint>& points, double r, const GeneratorModel& model) {
    if (r <= 0.0) throw InputError("window radius must be positive");
    if (points.empty()) return 0.0;
    const BBox bb = domain_bbox(model);

    if (model.is_spline()) {
        const double lo = bb.x0 + r;
        const double hi = bb.x1 - r;
        if (lo > hi) throw InputError("window radius exceeds the domain half-width");
        std::vector<double> xs;
        xs.reserve(points.size());
        for (const auto& p : points) xs.push_back(p.x);
        std::sort(xs.begin(), xs.end());
        // Exact sweep over interior centers: a window holding xs[i..jj] exists
        // iff [xs[jj]-r, xs[i]+r] meets [lo, hi].
        auto admissible = [&](std::size_t i, std::size_t jj) {
            return std::max(xs[jj] - r, lo) <= std::min(xs[i] + r, hi) + 1e-12;
        };
        int best = 0;
        std::size_t j = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (j < i) j = i;
            while (j + 1 < xs.size() && xs[j + 1] - xs[i] <= 2.0 * r) ++j;
            std::size_t jj = j;
            while (jj > i && !admissible(i, jj)) --jj;
            if (admissible(i, jj)) best = std::max(best, static_cast<int>(jj - i + 1));
        }
        return best / (2.0 * r);
    }

    const double lox = bb.x0 + r, hix = bb.x1 - r;
    const double loy = bb.y0 + r, hiy = bb.y1 - r;
    if (lox > hix || loy > hiy) throw InputError("window radius exceeds the domain half-width");
    const int g = 120;
    int best = 0;
    for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g; ++j) {
            const DomainPoint c =
                DomainPoint::plane(lox + (hix - lox) * i / g, loy + (hiy - loy) * j / g);
            best = std::max(best, count_within(points, c, r));
        }
    for (const auto& p : points) {
        if (p.x < lox || p.x > hix || p.y < loy || p.y > hiy) continue;
        best = std::max(best, count_within(points, p, r));
    }
    return best / (std::numbers::pi * r * r);
}

DensityReport density_bound_check(const GeneratorModel& model, const SampleSet& gamma, double r) {
    DensityReport rep;
    rep.window_radius = r;
    rep.minimal_strategy = gamma.strategy().kind == SamplingStrategy::Kind::Minimal;
    rep.density_samples = upper_density(gamma.all_points(), r, model);
    rep.density_innovations = upper_density(innovation_positions(model), r, model);
    rep.covering_2r0 = covering_count(model, 2.0 * model.support_radius());
    rep.multiplicity = piece_multiplicity(model);
    rep.upper_bound = rep.covering_2r0 * (rep.covering_2r0 + 1.0) / 2.0 * rep.multiplicity *
                      rep.density_innovations;
    // 5% allowance for finite-window boundary effects.
    rep.lower_ok = rep.density_samples >= 0.95 * rep.density_innovations;
    rep.upper_ok = rep.density_samples <= 1.05 * rep.upper_bound;
    return rep;
}

}  // namespace fri
