#include <doctest.h>

#include <algorithm>

#include "pebble/decomposition.hpp"
#include "pebble/instances.hpp"

using namespace pebble;

namespace {

Dag diamond() {
    return Dag::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

// Independent recomputation of one part's boundary through induced_subdag.
std::uint32_t part_boundary_oracle(const Dag& dag, const std::vector<VertexId>& segment) {
    Subdag sub = induced_subdag(dag, segment);
    std::vector<std::uint32_t> local(dag.vertex_count());
    for (std::uint32_t i = 0; i < sub.to_parent.size(); ++i) local[sub.to_parent[i]] = i;
    std::vector<VertexId> order;
    for (VertexId v : segment) order.push_back(local[v]);
    return boundary_profile(sub.graph, topo_order_from(sub.graph, order)).max_value;
}

void check_valid(const Dag& dag, const TopoOrder& order, const BudgetDecomposition& d) {
    CHECK(d.concatenated_order() == order.order);
    std::uint64_t sum = 0;
    for (const auto& p : d.parts) {
        REQUIRE(!p.segment.empty());
        CHECK(p.boundary == part_boundary_oracle(dag, p.segment));
        sum += p.boundary;
    }
    // sum of boundaries <= B, exact rational comparison
    CHECK(d.budget.int_ge(sum));
}

}  // namespace

TEST_CASE("diamond with B = 2 stays in one part") {
    Dag d = diamond();
    TopoOrder order = topological_sort(d);
    BudgetDecomposition dec = decompose(d, order, Rat(2, 1));
    REQUIRE(dec.part_count() == 1);
    CHECK(dec.parts[0].boundary == 2);
    check_valid(d, order, dec);
}

TEST_CASE("diamond with B = 1 collapses to singletons") {
    Dag d = diamond();
    TopoOrder order = topological_sort(d);
    BudgetDecomposition dec = decompose(d, order, Rat(1, 1));
    REQUIRE(dec.part_count() == 4);
    CHECK(dec.boundary_sum() == 0);
    CHECK(dec.part_count() <= std::min<std::uint64_t>(4, 1ull << (4 / 1)));
    check_valid(d, order, dec);
}

TEST_CASE("isolated vertices decompose into a single zero-boundary part") {
    Dag iso = Dag::from_edges(6, std::vector<Edge>{});
    TopoOrder order = topological_sort(iso);
    for (auto b : {Rat(0, 1), Rat(3, 2), Rat(10, 1)}) {
        BudgetDecomposition dec = decompose(iso, order, b);
        REQUIRE(dec.part_count() == 1);
        CHECK(dec.parts[0].boundary == 0);
    }
}

TEST_CASE("B = 0 terminates with zero-boundary parts") {
    SplitMix64 rng(31);
    for (int round = 0; round < 20; ++round) {
        Dag dag = random_dag(1 + static_cast<std::uint32_t>(rng.below(25)), 3, rng);
        TopoOrder order = topological_sort(dag);
        BudgetDecomposition dec = decompose(dag, order, Rat(0, 1));
        check_valid(dag, order, dec);
        CHECK(dec.boundary_sum() == 0);
        CHECK(dec.part_count() <= dag.vertex_count());
    }
}

TEST_CASE("decomposition contract on random (dag, B) pairs") {
    SplitMix64 rng(47);
    for (int round = 0; round < 120; ++round) {
        std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(60));
        Dag dag = random_dag(n, 4, rng);
        std::uint64_t num = 1 + rng.below(2 * dag.edge_count() + 3);
        std::uint64_t den = 1 + rng.below(4);
        Rat budget(num, den);
        DecomposeTrace trace;
        TopoOrder order = topological_sort(dag);
        BudgetDecomposition dec = decompose(dag, order, budget, &trace);
        check_valid(dag, order, dec);

        // l <= min(n, 2^floor(m/B)) and recursion depth <= floor(m/B) + 1
        std::uint64_t m = dag.edge_count();
        CHECK(dec.part_count() <= n);
        BigNat scaled(m);
        scaled = scaled.mul(budget.den());
        BigNat rem;
        std::uint64_t k = scaled.divmod(budget.num(), rem).to_u64_saturating();
        if (k < 63) CHECK(dec.part_count() <= (1ull << k));
        CHECK(trace.max_depth <= k + 1);

        // every split removed strictly more than the local budget's edges
        for (const auto& split : trace.splits) {
            std::uint64_t removed = split.window_edges - split.prefix_edges - split.suffix_edges;
            CHECK(split.window_budget.int_lt(removed));
        }
    }
}

TEST_CASE("merge_small_parts examples") {
    Dag d = diamond();
    TopoOrder order = topological_sort(d);
    SUBCASE("diamond singletons with d = 2") {
        BudgetDecomposition dec = decompose(d, order, Rat(1, 1));
        REQUIRE(dec.part_count() == 4);
        BudgetDecomposition merged = merge_small_parts(dec, 2);
        for (std::size_t i = 0; i + 1 < merged.parts.size(); ++i)
            CHECK(merged.parts[i].segment.size() >= 2);
        // bound quantity sum(b) + 1 + (d-1)(l-1) never increases: 0+1+3 = 4 before
        std::uint64_t after = merged.boundary_sum() + 1 + (2 - 1) * (merged.part_count() - 1);
        CHECK(after <= 4);
        CHECK(merged.concatenated_order() == order.order);
        for (const auto& p : merged.parts) CHECK(p.boundary == part_boundary_oracle(d, p.segment));
    }
    SUBCASE("single part unchanged") {
        BudgetDecomposition dec = decompose(d, order, Rat(2, 1));
        BudgetDecomposition merged = merge_small_parts(dec, 3);
        CHECK(merged.part_count() == 1);
        CHECK(merged.parts[0].segment == order.order);
    }
    SUBCASE("already-large parts unchanged") {
        BudgetDecomposition dec = decomposition_from_sizes(d, order, std::vector<std::uint32_t>{2, 2});
        BudgetDecomposition merged = merge_small_parts(dec, 2);
        REQUIRE(merged.part_count() == 2);
        CHECK(merged.parts[0].segment == std::vector<VertexId>{0, 1});
        CHECK(merged.parts[1].segment == std::vector<VertexId>{2, 3});
    }
}

TEST_CASE("merge_small_parts never increases the Lemma-4 quantity (random)") {
    SplitMix64 rng(77);
    for (int round = 0; round < 60; ++round) {
        std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.below(40));
        std::uint32_t d = 2 + static_cast<std::uint32_t>(rng.below(4));
        Dag dag = random_dag(n, d, rng);
        std::uint32_t deg = std::max<std::uint32_t>(2, dag.max_in_degree());
        TopoOrder order = topological_sort(dag);
        Rat budget(rng.below(dag.edge_count() + 2), 1);
        BudgetDecomposition dec = decompose(dag, order, budget);
        std::uint64_t before = dec.boundary_sum() + 1 + (deg - 1) * (dec.part_count() - 1);
        BudgetDecomposition merged = merge_small_parts(dec, deg);
        std::uint64_t after = merged.boundary_sum() + 1 + (deg - 1) * (merged.part_count() - 1);
        CHECK(after <= before);
        CHECK(merged.concatenated_order() == order.order);
        for (std::size_t i = 0; i + 1 < merged.parts.size(); ++i)
            CHECK(merged.parts[i].segment.size() >= deg);
        for (const auto& p : merged.parts)
            CHECK(p.boundary == part_boundary_oracle(dag, p.segment));
    }
}
