#include "fri/structure.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>

#include "fri/errors.hpp"

namespace fri {

namespace {

// Small union-find over dense indices.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }

    std::size_t find(std::size_t p) {
        std::size_t root = p;
        while (root != parent_[root]) root = parent_[root];
        while (p != root) {
            std::size_t next = parent_[p];
            parent_[p] = root;
            p = next;
        }
        return root;
    }

    void merge(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

void require_same_model(const Signal& f, const Signal& g) {
    if (f.model_ptr() != g.model_ptr())
        throw InputError("signals use different models");
}

}  // namespace

bool SupportGraph::connected() const {
    if (vertices.size() <= 1) return true;
    std::map<Index, std::size_t> pos;
    for (std::size_t i = 0; i < vertices.size(); ++i) pos[vertices[i]] = i;
    UnionFind uf(vertices.size());
    for (const auto& [a, b] : edges) uf.merge(pos.at(a), pos.at(b));
    const std::size_t root = uf.find(0);
    for (std::size_t i = 1; i < vertices.size(); ++i)
        if (uf.find(i) != root) return false;
    return true;
}

SupportGraph build_graph(const Signal& f, double zero_tol) {
    SupportGraph g;
    for (const auto& [lambda, c] : f.coeffs())
        if (std::abs(c) > zero_tol) g.vertices.push_back(lambda);
    const GeneratorModel& m = f.model();
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        for (std::size_t j = i + 1; j < g.vertices.size(); ++j)
            if (m.support_overlap(g.vertices[i], g.vertices[j]))
                g.edges.emplace_back(g.vertices[i], g.vertices[j]);
    return g;
}

IslandDecomposition decompose_islands(const Signal& f, double zero_tol) {
    const SupportGraph g = build_graph(f, zero_tol);
    IslandDecomposition out;
    if (g.vertices.empty()) return out;

    std::map<Index, std::size_t> pos;
    for (std::size_t i = 0; i < g.vertices.size(); ++i) pos[g.vertices[i]] = i;
    UnionFind uf(g.vertices.size());
    for (const auto& [a, b] : g.edges) uf.merge(pos.at(a), pos.at(b));

    std::map<std::size_t, std::vector<Index>> by_root;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        by_root[uf.find(i)].push_back(g.vertices[i]);

    std::vector<std::vector<Index>> islands;
    for (auto& [root, verts] : by_root) {
        (void)root;
        std::sort(verts.begin(), verts.end());
        islands.push_back(std::move(verts));
    }
    std::sort(islands.begin(), islands.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    for (auto& verts : islands) {
        std::map<Index, double> coeffs;
        for (Index v : verts) coeffs[v] = f.coeff(v);
        out.island_signals.emplace_back(f.model_ptr(), std::move(coeffs));
        out.islands.push_back(std::move(verts));
    }
    return out;
}

bool is_phase_retrievable(const Signal& f, double zero_tol) {
    const SupportGraph g = build_graph(f, zero_tol);
    if (g.vertices.empty())
        throw DomainError("phase retrievability undefined for f == 0");
    return g.connected();
}

ClassSize equivalence_class_size(const Signal& f, double zero_tol) {
    const auto islands = decompose_islands(f, zero_tol);
    ClassSize s;
    s.exponent = static_cast<int>(islands.size());
    if (s.exponent > 62) {
        s.exact = false;
        s.count = 0;
        return s;
    }
    s.count = 1ULL << s.exponent;
    return s;
}

std::vector<Signal> enumerate_equivalence_class(const Signal& f, std::uint64_t cap,
                                                double zero_tol) {
    const auto dec = decompose_islands(f, zero_tol);
    const int k = static_cast<int>(dec.size());
    if (k > 62 || (1ULL << k) > cap)
        throw CapacityError("equivalence class holds 2^" + std::to_string(k) +
                                " signals, above the requested cap",
                            k);
    std::vector<Signal> out;
    out.reserve(1ULL << k);
    for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
        std::map<Index, double> coeffs;
        for (int i = 0; i < k; ++i) {
            const double sign = (mask >> i) & 1 ? -1.0 : 1.0;
            for (Index v : dec.islands[static_cast<std::size_t>(i)])
                coeffs[v] = sign * f.coeff(v);
        }
        out.emplace_back(f.model_ptr(), std::move(coeffs));
    }
    return out;
}

bool in_equivalence_class(const Signal& f, const Signal& g, double zero_tol) {
    require_same_model(f, g);
    const auto dec = decompose_islands(f, zero_tol);

    // Supports must agree.
    std::vector<Index> vg;
    for (const auto& [lambda, c] : g.coeffs())
        if (std::abs(c) > zero_tol) vg.push_back(lambda);
    std::vector<Index> vf;
    for (const auto& isl : dec.islands) vf.insert(vf.end(), isl.begin(), isl.end());
    std::sort(vf.begin(), vf.end());
    if (vf != vg) return false;

    // One sign per island.
    for (const auto& isl : dec.islands) {
        double sign = 0.0;
        for (Index v : isl) {
            const double cf = f.coeff(v);
            const double cg = g.coeff(v);
            if (sign == 0.0) sign = cg * cf > 0.0 ? 1.0 : -1.0;
            if (std::abs(cg - sign * cf) > zero_tol) return false;
        }
    }
    return true;
}

NonseparabilityReport check_nonseparable(const Signal& f, double zero_tol) {
    const SupportGraph g = build_graph(f, zero_tol);
    if (g.vertices.empty())
        throw DomainError("nonseparability undefined for f == 0");

    // Reachability from the smallest vertex; the unreached set witnesses a
    // bipartition with no crossing edges.
    std::map<Index, std::vector<Index>> adj;
    for (const auto& [a, b] : g.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::map<Index, bool> reached;
    for (Index v : g.vertices) reached[v] = false;
    std::deque<Index> queue{g.vertices.front()};
    reached[g.vertices.front()] = true;
    while (!queue.empty()) {
        const Index v = queue.front();
        queue.pop_front();
        for (Index w : adj[v]) {
            if (!reached[w]) {
                reached[w] = true;
                queue.push_back(w);
            }
        }
    }

    NonseparabilityReport rep;
    for (Index v : g.vertices)
        (reached[v] ? rep.witness_part : rep.witness_rest).push_back(v);
    rep.nonseparable = rep.witness_rest.empty();
    if (rep.nonseparable) {
        rep.witness_part.clear();
    }
    return rep;
}

bool is_nonseparable(const Signal& f, double zero_tol) {
    return check_nonseparable(f, zero_tol).nonseparable;
}

}  // namespace fri
