#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fri/model.hpp"

namespace fri {

/// The support graph of a signal: vertices are the innovation positions with
/// nonzero coefficient, edges join positions with overlapping basis supports.
struct SupportGraph {
    std::vector<Index> vertices;                  // ascending
    std::vector<std::pair<Index, Index>> edges;   // a < b, lexicographically sorted

    bool connected() const;
};

SupportGraph build_graph(const Signal& f, double zero_tol = kZeroTol);

/// The unique splitting of a signal into nonseparable, pairwise pointwise-
/// disjoint components: the connected components of the support graph, ordered
/// by smallest vertex.
struct IslandDecomposition {
    std::vector<std::vector<Index>> islands;
    std::vector<Signal> island_signals;

    std::size_t size() const { return islands.size(); }
};

IslandDecomposition decompose_islands(const Signal& f, double zero_tol = kZeroTol);

/// True iff the support graph is connected, equivalently the signal is
/// determined up to a global sign by its magnitudes on the whole domain.
/// Undefined for the zero signal.
bool is_phase_retrievable(const Signal& f, double zero_tol = kZeroTol);

/// Number of signals with the same magnitudes everywhere: 2^(#islands).
/// Above 2^62 only the exponent is reported.
struct ClassSize {
    bool exact = true;
    std::uint64_t count = 1;
    int exponent = 0;
};

ClassSize equivalence_class_size(const Signal& f, double zero_tol = kZeroTol);

/// All sign combinations of the islands; refuses when the class exceeds cap.
std::vector<Signal> enumerate_equivalence_class(const Signal& f, std::uint64_t cap,
                                                double zero_tol = kZeroTol);

/// Symbolic membership test: same support, and a single sign per island.
bool in_equivalence_class(const Signal& f, const Signal& g, double zero_tol = kZeroTol);

/// Separability cross-check, implemented by reachability rather than the
/// union-find used for islands.  A separable signal yields a witness
/// bipartition with no crossing edges.
struct NonseparabilityReport {
    bool nonseparable = true;
    std::vector<Index> witness_part;  // empty when nonseparable
    std::vector<Index> witness_rest;
};

NonseparabilityReport check_nonseparable(const Signal& f, double zero_tol = kZeroTol);
bool is_nonseparable(const Signal& f, double zero_tol = kZeroTol);

}  // namespace fri
