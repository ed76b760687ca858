#include <doctest.h>

#include <cmath>
#include <memory>

#include "fri/errors.hpp"
#include "fri/experiment.hpp"
#include "fri/model.hpp"
#include "fri/rng.hpp"
#include "fri/structure.hpp"
#include "oracles.hpp"

using namespace fri;

namespace {

std::shared_ptr<const GeneratorModel> spline_model(int n_intervals) {
    std::vector<double> knots;
    for (int i = 0; i <= n_intervals; ++i) knots.push_back(i);
    return std::make_shared<GeneratorModel>(SplineModel(std::move(knots)));
}

// Sparse random signal: each coefficient nonzero with probability p.
Signal sparse_signal(std::shared_ptr<const GeneratorModel> m, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::map<Index, double> coeffs;
    for (Index n : m->innovation_ids()) {
        if (rng.uniform01() < p) coeffs[n] = rng.uniform(-1.0, 1.0) + (rng.uniform01() < 0.5 ? 0.5 : -0.5);
    }
    return Signal(std::move(m), std::move(coeffs));
}

// Four well-separated coefficient blocks, as in the islands illustration.
Signal four_island_fixture() {
    auto m = spline_model(40);
    std::map<Index, double> coeffs;
    for (Index base : {0, 10, 20, 30})
        for (Index d : {0, 1, 2}) coeffs[base + d] = 0.5 + 0.1 * static_cast<double>(d);
    return Signal(std::move(m), std::move(coeffs));
}

}  // namespace

TEST_CASE("graph construction: vertices, edges, zero signal") {
    auto m = spline_model(20);
    CHECK(build_graph(Signal(m, {})).vertices.empty());

    Signal near(m, {{0, 1.0}, {2, -1.0}});
    const auto g1 = build_graph(near);
    CHECK(g1.vertices == std::vector<Index>{0, 2});
    CHECK(g1.edges.size() == 1);

    Signal far(m, {{0, 1.0}, {5, -1.0}});
    const auto g2 = build_graph(far);
    CHECK(g2.vertices.size() == 2);
    CHECK(g2.edges.empty());

    // Coefficients below the zero tolerance do not enter the vertex set.
    Signal tiny(m, {{0, 1.0}, {7, 1e-14}});
    CHECK(build_graph(tiny).vertices == std::vector<Index>{0});
}

TEST_CASE("edges match the support-overlap oracle on random sparse signals") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        auto m = spline_model(16);
        const Signal f = sparse_signal(m, 0.6, seed);
        const auto g = build_graph(f);
        const auto& knots = m->spline().knots();
        std::size_t expected_edges = 0;
        for (std::size_t i = 0; i < g.vertices.size(); ++i)
            for (std::size_t j = i + 1; j < g.vertices.size(); ++j)
                if (oracles::spline_supports_overlap(knots, g.vertices[i], g.vertices[j]))
                    ++expected_edges;
        CHECK(g.edges.size() == expected_edges);
    }
}

TEST_CASE("phase retrievability is graph connectivity") {
    auto m = spline_model(20);
    CHECK(is_phase_retrievable(Signal(m, {{3, 2.0}})));
    CHECK_FALSE(is_phase_retrievable(Signal(m, {{0, 1.0}, {5, 1.0}})));
    CHECK_FALSE(is_phase_retrievable(four_island_fixture()));
    CHECK_THROWS_AS(is_phase_retrievable(Signal(m, {})), DomainError);
}

TEST_CASE("island decomposition: counts, invariants, ordering") {
    const Signal f = four_island_fixture();
    const auto dec = decompose_islands(f);
    REQUIRE(dec.size() == 4);

    // Ascending by smallest vertex, pairwise disjoint, union = V_f.
    std::vector<Index> all;
    for (std::size_t i = 0; i < dec.size(); ++i) {
        CHECK(!dec.islands[i].empty());
        if (i > 0) CHECK(dec.islands[i - 1].front() < dec.islands[i].front());
        all.insert(all.end(), dec.islands[i].begin(), dec.islands[i].end());
    }
    std::sort(all.begin(), all.end());
    CHECK(all == build_graph(f).vertices);

    // f = sum of island signals and pairwise pointwise products vanish.
    const auto grid = evaluation_grid(f.model());
    for (const auto& p : grid) {
        double sum = 0.0;
        for (const auto& isl : dec.island_signals) sum += eval_at(isl, p);
        CHECK(sum == doctest::Approx(eval_at(f, p)).epsilon(1e-12));
        for (std::size_t i = 0; i < dec.size(); ++i)
            for (std::size_t j = i + 1; j < dec.size(); ++j)
                CHECK(std::abs(eval_at(dec.island_signals[i], p) *
                               eval_at(dec.island_signals[j], p)) < 1e-12);
    }

    // Each island signal is itself nonseparable.
    for (const auto& isl : dec.island_signals) CHECK(is_nonseparable(isl));

    // Component count cross-check by matrix reachability.
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const Signal g = sparse_signal(spline_model(18), 0.5, seed);
        const auto sg = build_graph(g);
        if (sg.vertices.empty()) continue;
        CHECK(static_cast<int>(decompose_islands(g).size()) ==
              oracles::component_count(sg.vertices, sg.edges));
    }

    CHECK(decompose_islands(Signal(spline_model(10), {})).size() == 0);
}

TEST_CASE("equivalence class size") {
    auto m = spline_model(20);
    CHECK(equivalence_class_size(Signal(m, {{3, 1.0}})).count == 2);
    CHECK(equivalence_class_size(four_island_fixture()).count == 16);
    CHECK(equivalence_class_size(Signal(m, {})).count == 1);

    // Past 62 islands only the exponent is reported.
    auto big = spline_model(260);
    std::map<Index, double> coeffs;
    for (Index n = 0; n <= 256; n += 4) coeffs[n] = 1.0;
    const auto size = equivalence_class_size(Signal(big, coeffs));
    CHECK_FALSE(size.exact);
    CHECK(size.exponent == 65);
}

TEST_CASE("class enumeration lists every sign combination") {
    auto m = spline_model(20);
    Signal two(m, {{0, 1.0}, {1, 0.5}, {7, -1.0}});  // two islands
    const auto members = enumerate_equivalence_class(two, 1 << 10);
    REQUIRE(members.size() == 4);
    CHECK(equivalence_class_size(two).count == members.size());

    for (const auto& g : members) {
        CHECK(oracle_equivalence_check(two, g, 1e-10));
        for (const auto& [lambda, c] : g.coeffs())
            CHECK(std::abs(c) == doctest::Approx(std::abs(two.coeff(lambda))));
        CHECK(in_equivalence_class(two, g));
    }

    const auto one = enumerate_equivalence_class(Signal(m, {{4, 2.0}}), 4);
    REQUIRE(one.size() == 2);
    CHECK(one[0].coeff(4) == 2.0);
    CHECK(one[1].coeff(4) == -2.0);

    CHECK_THROWS_AS(enumerate_equivalence_class(four_island_fixture(), 8), CapacityError);
    try {
        enumerate_equivalence_class(four_island_fixture(), 8);
    } catch (const CapacityError& e) {
        CHECK(e.exponent() == 4);
    }
}

TEST_CASE("membership decision: symbolic vs grid oracle") {
    const Signal f = four_island_fixture();

    // -f and island flips are members.
    std::map<Index, double> neg;
    for (const auto& [l, c] : f.coeffs()) neg[l] = -c;
    CHECK(in_equivalence_class(f, Signal(f.model_ptr(), neg)));

    const auto dec = decompose_islands(f);
    std::map<Index, double> flip = f.coeffs();
    for (Index v : dec.islands[1]) flip[v] = -flip[v];
    CHECK(in_equivalence_class(f, Signal(f.model_ptr(), flip)));

    // Flipping a single coefficient inside a multi-vertex island breaks it.
    std::map<Index, double> bad = f.coeffs();
    bad[dec.islands[0][0]] = -bad[dec.islands[0][0]];
    CHECK_FALSE(in_equivalence_class(f, Signal(f.model_ptr(), bad)));

    // Model mismatch is an input error.
    auto other = spline_model(40);
    CHECK_THROWS_AS(in_equivalence_class(f, Signal(other, {})), InputError);

    // Symbolic decision agrees with the dense-grid comparison on small models.
    for (std::uint64_t seed = 100; seed < 112; ++seed) {
        auto m = spline_model(15);  // 12 innovation positions
        const Signal a = sparse_signal(m, 0.55, seed);
        if (build_graph(a).vertices.empty()) continue;
        const auto members = enumerate_equivalence_class(a, 1 << 12);
        for (const auto& g : members) {
            CHECK(in_equivalence_class(a, g) == oracle_equivalence_check(a, g, 1e-9));
            CHECK(in_equivalence_class(a, g));
        }
        // A magnitude-breaking perturbation must fail both tests.
        std::map<Index, double> pert = a.coeffs();
        pert.begin()->second += 0.37;
        const Signal p(a.model_ptr(), pert);
        CHECK(in_equivalence_class(a, p) == oracle_equivalence_check(a, p, 1e-9));
    }
}

TEST_CASE("nonseparability check and witness") {
    auto m = spline_model(20);
    CHECK(is_nonseparable(Signal(m, {{2, 1.0}})));

    const auto rep = check_nonseparable(Signal(m, {{0, 1.0}, {5, 1.0}}));
    CHECK_FALSE(rep.nonseparable);
    CHECK(rep.witness_part == std::vector<Index>{0});
    CHECK(rep.witness_rest == std::vector<Index>{5});

    CHECK_THROWS_AS(is_nonseparable(Signal(m, {})), DomainError);

    // Agreement with connectivity on random fixtures.
    for (std::uint64_t seed = 200; seed < 215; ++seed) {
        const Signal f = sparse_signal(spline_model(14), 0.6, seed);
        if (build_graph(f).vertices.empty()) continue;
        CHECK(is_nonseparable(f) == is_phase_retrievable(f));
        CHECK(is_nonseparable(f) == (decompose_islands(f).size() == 1));
    }
}
