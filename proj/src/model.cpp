#include "fri/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "fri/errors.hpp"
#include "fri/linalg.hpp"

namespace fri {

double distance(const DomainPoint& a, const DomainPoint& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// ---------------------------------------------------------------------------
// SplineModel

SplineModel::SplineModel(std::vector<double> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 6)
        throw InputError("spline model needs at least 6 knots (N >= 5)");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i] > knots_[i - 1]))
            throw InputError("spline knots must be strictly increasing");
}

int SplineModel::find_span(double x) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    int i = static_cast<int>(it - knots_.begin()) - 1;
    return std::clamp(i, 0, num_intervals() - 1);
}

double SplineModel::eval_basis(Index n, double x) const {
    const double* t = knots_.data() + n;
    if (x <= t[0] || x >= t[4]) return 0.0;
    // Cox-de Boor on the five local knots.
    double N[4];
    for (int l = 0; l < 4; ++l) N[l] = (x >= t[l] && x < t[l + 1]) ? 1.0 : 0.0;
    for (int p = 1; p <= 3; ++p) {
        for (int l = 0; l + p < 4; ++l) {
            const double w1 = (x - t[l]) / (t[l + p] - t[l]);
            const double w2 = (t[l + p + 1] - x) / (t[l + p + 1] - t[l + 1]);
            N[l] = w1 * N[l] + w2 * N[l + 1];
        }
    }
    return N[0];
}

// ---------------------------------------------------------------------------
// TriangulationModel

namespace {

double twice_signed_area(const DomainPoint& a, const DomainPoint& b, const DomainPoint& c) {
    return (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
}

int orient_sign(const DomainPoint& a, const DomainPoint& b, const DomainPoint& c, double tol) {
    const double v = twice_signed_area(a, b, c);
    if (v > tol) return 1;
    if (v < -tol) return -1;
    return 0;
}

// Segments ab and cd cross at a single interior point of both.
bool proper_crossing(const DomainPoint& a, const DomainPoint& b, const DomainPoint& c,
                     const DomainPoint& d, double tol) {
    const int o1 = orient_sign(a, b, c, tol);
    const int o2 = orient_sign(a, b, d, tol);
    const int o3 = orient_sign(c, d, a, tol);
    const int o4 = orient_sign(c, d, b, tol);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

TriangulationModel::TriangulationModel(std::vector<DomainPoint> nodes,
                                       std::vector<Triangle> triangles,
                                       std::vector<Index> inner_nodes)
    : nodes_(std::move(nodes)), triangles_(std::move(triangles)), inner_nodes_(std::move(inner_nodes)) {
    const int nn = static_cast<int>(nodes_.size());
    if (nn < 3 || triangles_.empty()) throw InputError("triangulation needs nodes and triangles");

    double scale = 0.0;
    for (const auto& p : nodes_) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    const double area_tol = 1e-12 * std::max(1.0, scale * scale);

    for (auto& t : triangles_) {
        for (int v : t.v)
            if (v < 0 || v >= nn) throw InputError("triangle vertex out of range");
        double s = twice_signed_area(nodes_[t.v[0]], nodes_[t.v[1]], nodes_[t.v[2]]);
        if (std::abs(s) <= area_tol) throw InputError("degenerate triangle (zero area)");
        if (s < 0) std::swap(t.v[1], t.v[2]);  // normalize to positive orientation
    }

    // Pairwise interior disjointness: a strictly interior vertex or centroid,
    // or a proper edge crossing, witnesses an overlap.
    const double tol = area_tol;
    for (std::size_t i = 0; i < triangles_.size(); ++i) {
        for (std::size_t j = i + 1; j < triangles_.size(); ++j) {
            const auto& A = triangles_[i];
            const auto& B = triangles_[j];
            auto strictly_inside = [&](const DomainPoint& p, const Triangle& t) {
                double bary[3];
                const DomainPoint &a = nodes_[t.v[0]], &b = nodes_[t.v[1]], &c = nodes_[t.v[2]];
                const double det = twice_signed_area(a, b, c);
                bary[1] = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
                bary[2] = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
                bary[0] = 1.0 - bary[1] - bary[2];
                return bary[0] > 1e-9 && bary[1] > 1e-9 && bary[2] > 1e-9;
            };
            auto centroid = [&](const Triangle& t) {
                return DomainPoint::plane((nodes_[t.v[0]].x + nodes_[t.v[1]].x + nodes_[t.v[2]].x) / 3.0,
                                          (nodes_[t.v[0]].y + nodes_[t.v[1]].y + nodes_[t.v[2]].y) / 3.0);
            };
            bool overlap = strictly_inside(centroid(A), B) || strictly_inside(centroid(B), A);
            for (int k = 0; k < 3 && !overlap; ++k) {
                overlap = strictly_inside(nodes_[A.v[k]], B) || strictly_inside(nodes_[B.v[k]], A);
            }
            for (int ea = 0; ea < 3 && !overlap; ++ea) {
                for (int eb = 0; eb < 3 && !overlap; ++eb) {
                    overlap = proper_crossing(nodes_[A.v[ea]], nodes_[A.v[(ea + 1) % 3]],
                                              nodes_[B.v[eb]], nodes_[B.v[(eb + 1) % 3]], tol);
                }
            }
            if (overlap) throw InputError("triangles are not pairwise interior-disjoint");
        }
    }

    inner_mask_.assign(nn, 0);
    std::set<Index> seen;
    for (Index v : inner_nodes_) {
        if (v < 0 || v >= nn) throw InputError("inner node id out of range");
        if (!seen.insert(v).second) throw InputError("duplicate inner node id");
        inner_mask_[static_cast<std::size_t>(v)] = 1;
    }
    std::sort(inner_nodes_.begin(), inner_nodes_.end());

    node_triangles_.assign(nn, {});
    for (int t = 0; t < num_triangles(); ++t)
        for (int v : triangles_[t].v) node_triangles_[v].push_back(t);
    for (Index v : inner_nodes_)
        if (node_triangles_[static_cast<std::size_t>(v)].empty())
            throw InputError("inner node belongs to no triangle");
}

TriangulationModel TriangulationModel::structured(int rows, int cols, double cell, double x0,
                                                  double y0) {
    if (rows < 1 || cols < 1 || cell <= 0.0) throw InputError("invalid structured mesh spec");
    std::vector<DomainPoint> nodes;
    nodes.reserve(static_cast<std::size_t>((rows + 1) * (cols + 1)));
    for (int r = 0; r <= rows; ++r)
        for (int c = 0; c <= cols; ++c) nodes.push_back(DomainPoint::plane(x0 + c * cell, y0 + r * cell));
    auto id = [cols](int r, int c) { return r * (cols + 1) + c; };
    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(2 * rows * cols));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            tris.push_back({{id(r, c), id(r, c + 1), id(r + 1, c)}});
            tris.push_back({{id(r, c + 1), id(r + 1, c + 1), id(r + 1, c)}});
        }
    }
    std::vector<Index> inner;
    for (int r = 1; r < rows; ++r)
        for (int c = 1; c < cols; ++c) inner.push_back(id(r, c));
    return TriangulationModel(std::move(nodes), std::move(tris), std::move(inner));
}

bool TriangulationModel::is_inner(Index node) const {
    return node >= 0 && node < static_cast<Index>(inner_mask_.size()) &&
           inner_mask_[static_cast<std::size_t>(node)];
}

const std::vector<int>& TriangulationModel::incident_triangles(Index node) const {
    if (node < 0 || node >= static_cast<Index>(node_triangles_.size()))
        throw InputError("node id out of range");
    return node_triangles_[static_cast<std::size_t>(node)];
}

void TriangulationModel::barycentric(int theta, const DomainPoint& p, double bary[3]) const {
    const Triangle& t = triangles_[static_cast<std::size_t>(theta)];
    const DomainPoint &a = nodes_[t.v[0]], &b = nodes_[t.v[1]], &c = nodes_[t.v[2]];
    const double det = twice_signed_area(a, b, c);
    bary[1] = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
    bary[2] = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
    bary[0] = 1.0 - bary[1] - bary[2];
}

bool TriangulationModel::triangle_contains(int theta, const DomainPoint& p, double tol) const {
    double bary[3];
    barycentric(theta, p, bary);
    return bary[0] >= -tol && bary[1] >= -tol && bary[2] >= -tol;
}

int TriangulationModel::locate(const DomainPoint& p, double tol) const {
    for (int t = 0; t < num_triangles(); ++t)
        if (triangle_contains(t, p, tol)) return t;
    return -1;
}

double TriangulationModel::eval_basis(Index node, const DomainPoint& p) const {
    for (int t : incident_triangles(node)) {
        if (!triangle_contains(t, p)) continue;
        double bary[3];
        barycentric(t, p, bary);
        const Triangle& tri = triangles_[static_cast<std::size_t>(t)];
        for (int k = 0; k < 3; ++k)
            if (tri.v[k] == node) return std::max(0.0, bary[k]);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// GeneratorModel

GeneratorModel::GeneratorModel(SplineModel m, std::optional<double> support_radius)
    : variant_(std::move(m)) {
    const auto& t = spline().knots();
    const int N = spline().num_intervals();
    for (int n = 0; n + 4 <= N; ++n) {
        innovation_ids_.push_back(n);
        min_r0_ = std::max(min_r0_, (t[n + 4] - t[n]) / 2.0);
    }
    r0_ = support_radius.value_or(min_r0_);
    if (r0_ + 1e-12 < min_r0_)
        throw InputError("support radius too small for the spline basis supports");
    compute_sup_norm();
}

GeneratorModel::GeneratorModel(TriangulationModel m, std::optional<double> support_radius)
    : variant_(std::move(m)) {
    const auto& tri = triangulation();
    innovation_ids_ = tri.inner_nodes();
    if (innovation_ids_.empty()) throw InputError("triangulation has no inner nodes");
    for (Index v : innovation_ids_) {
        const DomainPoint& center = tri.nodes()[static_cast<std::size_t>(v)];
        for (int t : tri.incident_triangles(v))
            for (int w : tri.triangles()[static_cast<std::size_t>(t)].v)
                min_r0_ = std::max(min_r0_, distance(center, tri.nodes()[static_cast<std::size_t>(w)]));
    }
    r0_ = support_radius.value_or(min_r0_);
    if (r0_ + 1e-12 < min_r0_)
        throw InputError("support radius too small for the hat basis supports");
    compute_sup_norm();
}

bool GeneratorModel::is_innovation(Index lambda) const {
    return std::binary_search(innovation_ids_.begin(), innovation_ids_.end(), lambda);
}

void GeneratorModel::require_innovation(Index lambda) const {
    if (!is_innovation(lambda)) throw InputError("invalid innovation index");
}

DomainPoint GeneratorModel::anchor(Index lambda) const {
    require_innovation(lambda);
    if (is_spline()) {
        const auto& t = spline().knots();
        return DomainPoint::interval((t[lambda] + t[lambda + 4]) / 2.0);
    }
    return triangulation().nodes()[static_cast<std::size_t>(lambda)];
}

int GeneratorModel::num_pieces() const {
    return is_spline() ? spline().num_intervals() : triangulation().num_triangles();
}

std::vector<Index> GeneratorModel::active_indices(int theta) const {
    if (theta < 0 || theta >= num_pieces()) throw InputError("piece index out of range");
    std::vector<Index> out;
    if (is_spline()) {
        const Index last = spline().num_intervals() - 4;
        for (Index n = std::max<Index>(0, theta - 3); n <= std::min<Index>(last, theta); ++n)
            out.push_back(n);
    } else {
        const auto& t = triangulation().triangles()[static_cast<std::size_t>(theta)];
        for (int v : t.v)
            if (triangulation().is_inner(v)) out.push_back(v);
        std::sort(out.begin(), out.end());
    }
    return out;
}

DomainPoint GeneratorModel::piece_point(int theta, double u, double v) const {
    if (theta < 0 || theta >= num_pieces()) throw InputError("piece index out of range");
    if (is_spline()) {
        const auto& t = spline().knots();
        return DomainPoint::interval(t[theta] + u * (t[theta + 1] - t[theta]));
    }
    if (u + v > 1.0) {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    const auto& tri = triangulation().triangles()[static_cast<std::size_t>(theta)];
    const auto& nodes = triangulation().nodes();
    const DomainPoint &a = nodes[tri.v[0]], &b = nodes[tri.v[1]], &c = nodes[tri.v[2]];
    return DomainPoint::plane(a.x + u * (b.x - a.x) + v * (c.x - a.x),
                              a.y + u * (b.y - a.y) + v * (c.y - a.y));
}

void GeneratorModel::validate_point(const DomainPoint& x) const {
    if (x.dim != dim()) throw InputError("domain point dimension mismatch");
    if (!in_domain(x)) throw InputError("point outside the signal domain");
}

bool GeneratorModel::in_domain(const DomainPoint& x) const {
    if (x.dim != dim()) return false;
    if (is_spline()) return x.x >= spline().a() && x.x <= spline().b();
    return triangulation().locate(x, 1e-9) >= 0;
}

double GeneratorModel::eval_basis(Index lambda, const DomainPoint& x) const {
    require_innovation(lambda);
    validate_point(x);
    if (is_spline()) return spline().eval_basis(lambda, x.x);
    return triangulation().eval_basis(lambda, x);
}

bool GeneratorModel::support_overlap(Index la, Index lb) const {
    require_innovation(la);
    require_innovation(lb);
    if (is_spline()) return std::abs(la - lb) <= 3;
    const auto& ta = triangulation().incident_triangles(la);
    const auto& tb = triangulation().incident_triangles(lb);
    for (int a : ta)
        for (int b : tb)
            if (a == b) return true;
    return false;
}

void GeneratorModel::compute_sup_norm() {
    double best = 0.0;
    for (const auto& g : evaluation_grid(*this)) {
        for (Index lambda : active_indices(g.piece)) {
            const double v = is_spline() ? spline().eval_basis(lambda, g.x.x)
                                         : triangulation().eval_basis(lambda, g.x);
            best = std::max(best, std::abs(v));
        }
    }
    sup_norm_ = best;
}

// ---------------------------------------------------------------------------
// Signal

Signal::Signal(std::shared_ptr<const GeneratorModel> model, std::map<Index, double> coeffs)
    : model_(std::move(model)), coeffs_(std::move(coeffs)) {
    if (!model_) throw InputError("signal needs a model");
    for (const auto& [lambda, c] : coeffs_) {
        (void)c;
        if (!model_->is_innovation(lambda)) throw InputError("coefficient at invalid innovation index");
    }
}

double Signal::coeff(Index lambda) const {
    auto it = coeffs_.find(lambda);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double Signal::eval(const DomainPoint& x) const {
    const GeneratorModel& m = *model_;
    if (x.dim != m.dim() || !m.in_domain(x)) throw InputError("point outside the signal domain");
    double sum = 0.0;
    if (m.is_spline()) {
        const auto& sp = m.spline();
        const int span = sp.find_span(x.x);
        const Index last = sp.num_intervals() - 4;
        for (Index n = std::max<Index>(0, span - 3); n <= std::min<Index>(last, span); ++n) {
            auto it = coeffs_.find(n);
            if (it != coeffs_.end()) sum += it->second * sp.eval_basis(n, x.x);
        }
        return sum;
    }
    const auto& tri = m.triangulation();
    const int theta = tri.locate(x, 1e-9);
    double bary[3];
    tri.barycentric(theta, x, bary);
    const auto& t = tri.triangles()[static_cast<std::size_t>(theta)];
    for (int k = 0; k < 3; ++k) {
        auto it = coeffs_.find(t.v[k]);
        if (it != coeffs_.end()) sum += it->second * bary[k];
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Grid and local linear independence

std::vector<GridPoint> evaluation_grid(const GeneratorModel& model) {
    std::vector<GridPoint> grid;
    if (model.is_spline()) {
        const auto& t = model.spline().knots();
        const int N = model.spline().num_intervals();
        grid.reserve(static_cast<std::size_t>(20 * N));
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < 20; ++j)
                grid.push_back({DomainPoint::interval(t[i] + (t[i + 1] - t[i]) * j / 19.0), i});
    } else {
        const auto& tri = model.triangulation();
        grid.reserve(static_cast<std::size_t>(15 * tri.num_triangles()));
        for (int th = 0; th < tri.num_triangles(); ++th) {
            const auto& tr = tri.triangles()[static_cast<std::size_t>(th)];
            const auto& nodes = tri.nodes();
            for (int i = 0; i <= 4; ++i) {
                for (int j = 0; i + j <= 4; ++j) {
                    const int k = 4 - i - j;
                    const double bx = (i * nodes[tr.v[0]].x + j * nodes[tr.v[1]].x + k * nodes[tr.v[2]].x) / 4.0;
                    const double by = (i * nodes[tr.v[0]].y + j * nodes[tr.v[1]].y + k * nodes[tr.v[2]].y) / 4.0;
                    grid.push_back({DomainPoint::plane(bx, by), th});
                }
            }
        }
    }
    return grid;
}

double eval_at(const Signal& f, const GridPoint& p) {
    const GeneratorModel& m = f.model();
    double sum = 0.0;
    if (m.is_spline()) {
        for (Index n : m.active_indices(p.piece)) {
            auto it = f.coeffs().find(n);
            if (it != f.coeffs().end()) sum += it->second * m.spline().eval_basis(n, p.x.x);
        }
        return sum;
    }
    const auto& tri = m.triangulation();
    double bary[3];
    tri.barycentric(p.piece, p.x, bary);
    const auto& t = tri.triangles()[static_cast<std::size_t>(p.piece)];
    for (int k = 0; k < 3; ++k) {
        auto it = f.coeffs().find(t.v[k]);
        if (it != f.coeffs().end()) sum += it->second * bary[k];
    }
    return sum;
}

LocalIndependenceReport check_local_linear_independence(const GeneratorModel& model, int theta,
                                                        double tol) {
    const std::vector<Index> active = model.active_indices(theta);
    LocalIndependenceReport rep;
    if (active.empty()) {
        rep.independent = true;
        rep.vacuous = true;
        rep.smallest_relative_sv = 0.0;
        return rep;
    }
    const int n = static_cast<int>(active.size());
    const int m = std::max(5 * n, 25);

    // Low-discrepancy interior points, offset by the piece index so the check
    // is deterministic per piece.
    constexpr double kAlpha1 = 0.7548776662466927;  // 1/plastic
    constexpr double kAlpha2 = 0.5698402909980532;  // 1/plastic^2
    const double off1 = std::fmod(0.5 + theta * 0.6180339887498949, 1.0);
    const double off2 = std::fmod(0.25 + theta * 0.3819660112501051, 1.0);

    Eigen::MatrixXd values(m, n);
    for (int j = 0; j < m; ++j) {
        const double u = std::fmod(off1 + (j + 1) * kAlpha1, 1.0);
        const double v = std::fmod(off2 + (j + 1) * kAlpha2, 1.0);
        const DomainPoint p = model.piece_point(theta, u, v);
        for (int c = 0; c < n; ++c) values(j, c) = model.eval_basis(active[c], p);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(values);
    const auto& sv = svd.singularValues();
    rep.smallest_relative_sv = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
    rep.independent = numerical_rank(values, tol) == n;
    return rep;
}

}  // namespace fri
