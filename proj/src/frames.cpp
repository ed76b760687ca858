#include "fri/frames.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "fri/errors.hpp"

namespace fri {

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * sv(0)) ++rank;
    return rank;
}

bool has_full_column_rank(const Eigen::MatrixXd& m, double rel_tol) {
    return numerical_rank(m, rel_tol) == m.cols();
}

double smallest_singular_value(const Eigen::MatrixXd& m) {
    if (m.rows() < m.cols() || m.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(m.cols() - 1);
}

namespace {

void check_frame(const FrameMatrix& f) {
    if (f.dim() == 0) throw InputError("frame dimension must be positive");
    if (f.size() == 0) throw InputError("frame must contain at least one vector");
    if (f.size() > kMaxFrameSize)
        throw CapacityError("frame too large for exact subset enumeration (M > 24)", f.size());
}

// Gramian eigenvalue ratios below this are numerical zeros: they correspond
// to squared singular-value ratios that doubles cannot resolve.
constexpr double kGramianFloor = 1e-13;

// Smallest Gramian eigenvalue of one side of a split, with empty, too-small,
// or rank-deficient sides mapped to exactly zero.  The complement-property
// decision and the stability functional share this value, so the two cannot
// disagree about numerical zeros.
double split_side_value(const Eigen::MatrixXd& rows, std::uint64_t mask, bool in_mask,
                        double rel_floor) {
    const int m = static_cast<int>(rows.rows());
    const int n = static_cast<int>(rows.cols());
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    int count = 0;
    for (int i = 0; i < m; ++i) {
        if ((((mask >> i) & 1) != 0) != in_mask) continue;
        gram.noalias() += rows.row(i).transpose() * rows.row(i);
        ++count;
    }
    if (count < n) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double lam_min = es.eigenvalues()(0);
    const double lam_max = es.eigenvalues()(n - 1);
    if (lam_max <= 0.0 || lam_min <= rel_floor * lam_max) return 0.0;
    return lam_min;
}

FrameSplit split_of_mask(int m, std::uint64_t mask) {
    FrameSplit s;
    for (int i = 0; i < m; ++i) ((mask >> i) & 1 ? s.subset : s.complement).push_back(i);
    return s;
}

// Every n rows linearly independent.  Combined with M >= 2n-1 this forces the
// complement property, since one side of any split has at least n rows.
bool full_spark(const Eigen::MatrixXd& rows, double rel_tol) {
    const int m = static_cast<int>(rows.rows());
    const int n = static_cast<int>(rows.cols());
    if (m < n) return false;
    std::vector<int> pick(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
    Eigen::MatrixXd sub(n, n);
    while (true) {
        for (int i = 0; i < n; ++i) sub.row(i) = rows.row(pick[static_cast<std::size_t>(i)]);
        if (!has_full_column_rank(sub, rel_tol)) return false;
        int i = n - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - n + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return true;
}

}  // namespace

bool is_phase_retrievable_frame(const FrameMatrix& f, double rank_tol) {
    check_frame(f);
    const int m = f.size();
    const int n = f.dim();
    if (m < 2 * n - 1) return false;  // some split keeps fewer than n rows on both sides
    if (full_spark(f.vectors, rank_tol)) return true;

    // Full complement-property enumeration; masks keep row 0 in the subset
    // since splits are symmetric.
    const double floor = std::max(rank_tol * rank_tol, kGramianFloor);
    const std::uint64_t total = 1ULL << (m - 1);
    for (std::uint64_t half = 0; half < total; ++half) {
        const std::uint64_t mask = (half << 1) | 1;
        if (split_side_value(f.vectors, mask, true, floor) <= 0.0 &&
            split_side_value(f.vectors, mask, false, floor) <= 0.0)
            return false;
    }
    return true;
}

StabilityReport stability_report(const FrameMatrix& f) {
    check_frame(f);
    const int m = f.size();
    StabilityReport rep;
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 1;

    const std::uint64_t total = 1ULL << (m - 1);
    for (std::uint64_t half = 0; half < total; ++half) {
        const std::uint64_t mask = (half << 1) | 1;
        const double a = split_side_value(f.vectors, mask, true, kGramianFloor);
        if (a >= best) continue;  // max of the two sides cannot improve the minimum
        const double side = std::max(a, split_side_value(f.vectors, mask, false, kGramianFloor));
        if (side < best) {
            best = side;
            best_mask = mask;
        }
    }
    rep.norm = std::sqrt(best);
    rep.worst = split_of_mask(m, best_mask);
    return rep;
}

double stability_norm(const FrameMatrix& f) { return stability_report(f).norm; }

bool is_minimal_pr_frame(const FrameMatrix& f, double rank_tol) {
    if (!is_phase_retrievable_frame(f, rank_tol)) return false;
    const int m = f.size();
    if (m == 1) return true;  // n = 1, single nonzero vector
    for (int drop = 0; drop < m; ++drop) {
        FrameMatrix sub;
        sub.vectors.resize(m - 1, f.dim());
        int r = 0;
        for (int i = 0; i < m; ++i)
            if (i != drop) sub.vectors.row(r++) = f.vectors.row(i);
        if (is_phase_retrievable_frame(sub, rank_tol)) return false;
    }
    return true;
}

namespace {

std::string describe_split(const FrameSplit& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.subset.size(); ++i)
        out += (i ? "," : "") + std::to_string(s.subset[i]);
    out += "} | {";
    for (std::size_t i = 0; i < s.complement.size(); ++i)
        out += (i ? "," : "") + std::to_string(s.complement[i]);
    return out + "}";
}

FrameMatrix gather(const std::vector<std::pair<DomainPoint, Eigen::VectorXd>>& candidates,
                   const std::vector<int>& chosen) {
    FrameMatrix f;
    const int n = static_cast<int>(candidates.front().second.size());
    f.vectors.resize(static_cast<int>(chosen.size()), n);
    FrameProvenance prov;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        f.vectors.row(static_cast<int>(i)) = candidates[static_cast<std::size_t>(chosen[i])].second;
        prov.points.push_back(candidates[static_cast<std::size_t>(chosen[i])].first);
    }
    f.provenance = std::move(prov);
    return f;
}

}  // namespace

FrameMatrix extract_minimal_pr_frame(
    const std::vector<std::pair<DomainPoint, Eigen::VectorXd>>& candidates, double rank_tol) {
    if (candidates.empty()) throw InputError("empty candidate pool");
    const int n = static_cast<int>(candidates.front().second.size());
    if (n == 0) throw InputError("frame dimension must be positive");
    for (const auto& [p, v] : candidates) {
        (void)p;
        if (static_cast<int>(v.size()) != n) throw InputError("candidate dimension mismatch");
    }
    if (static_cast<int>(candidates.size()) < 2 * n - 1)
        throw InputError("candidate pool smaller than 2n-1");

    std::vector<int> chosen;
    std::vector<char> used(candidates.size(), 0);

    // Grow: take the candidate maximizing the stability functional of the
    // tentative frame, lowest index on ties, until phase retrievability holds.
    while (chosen.empty() || !is_phase_retrievable_frame(gather(candidates, chosen), rank_tol)) {
        int best = -1;
        double best_norm = -1.0;
        for (int c = 0; c < static_cast<int>(candidates.size()); ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            std::vector<int> tent = chosen;
            tent.push_back(c);
            const double norm = static_cast<int>(tent.size()) <= kMaxFrameSize
                                    ? stability_norm(gather(candidates, tent))
                                    : 0.0;
            if (norm > best_norm + 1e-15) {
                best_norm = norm;
                best = c;
            }
        }
        if (best < 0) {
            auto rep = stability_report(gather(candidates, chosen));
            throw CertificationError("candidate pool admits no phase retrievable frame; split " +
                                     describe_split(rep.worst) +
                                     " stays rank-deficient on both sides");
        }
        chosen.push_back(best);
        used[static_cast<std::size_t>(best)] = 1;
    }

    // Prune to a fixed point: drop the lowest-index vector whose removal
    // preserves phase retrievability.
    bool removed = true;
    while (removed && chosen.size() > 1) {
        removed = false;
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            std::vector<int> tent = chosen;
            tent.erase(tent.begin() + static_cast<std::ptrdiff_t>(i));
            if (is_phase_retrievable_frame(gather(candidates, tent), rank_tol)) {
                chosen = std::move(tent);
                removed = true;
                break;
            }
        }
    }
    return gather(candidates, chosen);
}

}  // namespace fri
