#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pebble/decomposition.hpp"
#include "pebble/instances.hpp"
#include "pebble/oracle.hpp"
#include "pebble/schedulers.hpp"

using namespace pebble;

namespace {

Dag diamond() {
    return Dag::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

Dag chain(std::uint32_t n) {
    std::vector<Edge> edges;
    for (VertexId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return Dag::from_edges(n, edges);
}

// The master property: legal and full, peak within the claimed space bound,
// moves within the claimed time bound.
PebbleMetrics check_report(const Dag& dag, const SchedulerReport& rep) {
    PebbleMetrics m = simulate(dag, rep.schedule);
    CHECK(m.full(dag.vertex_count()));
    CHECK(m.peak_pebbles <= rep.space_bound);
    CHECK(rep.time_bound.holds_for(m.move_count));
    return m;
}

}  // namespace

TEST_CASE("topo_schedule: chain, singleton, diamond") {
    {
        Dag c = chain(3);
        SchedulerReport rep = topo_schedule(c, topological_sort(c));
        PebbleMetrics m = check_report(c, rep);
        CHECK(m.move_count == 6);
        CHECK(m.peak_pebbles == 2);
        CHECK(m.emptying());
        CHECK(rep.space_bound == 2);
    }
    {
        Dag s = Dag::from_edges(1, std::vector<Edge>{});
        SchedulerReport rep = topo_schedule(s, topological_sort(s));
        CHECK(rep.schedule.materialize() ==
              std::vector<Move>{Move::place(0), Move::remove(0)});
    }
    {
        Dag d = diamond();
        SchedulerReport rep = topo_schedule(d, topological_sort(d));
        PebbleMetrics m = check_report(d, rep);
        CHECK(m.move_count == 8);
        CHECK(m.peak_pebbles <= 3);
        CHECK(m.emptying());
    }
}

TEST_CASE("topo_schedule over random graphs: exactly 2n moves, peak = b+1, emptying") {
    SplitMix64 rng(101);
    for (int round = 0; round < 60; ++round) {
        std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(60));
        Dag dag = random_dag(n, 5, rng);
        TopoOrder order = topological_sort(dag);
        SchedulerReport rep = topo_schedule(dag, order);
        PebbleMetrics m = check_report(dag, rep);
        CHECK(m.move_count == 2ull * n);
        CHECK(m.emptying());
        CHECK(m.peak_pebbles == boundary_profile(dag, order).max_value + 1);
    }
}

TEST_CASE("schedule_from_decomposition: single part is exactly the topo schedule") {
    Dag d = diamond();
    TopoOrder order = topological_sort(d);
    BudgetDecomposition dec = decompose(d, order, Rat(2, 1));
    REQUIRE(dec.part_count() == 1);
    SchedulerReport a = schedule_from_decomposition(d, dec);
    SchedulerReport b = topo_schedule(d, order);
    CHECK(a.schedule.materialize() == b.schedule.materialize());
}

TEST_CASE("schedule_from_decomposition: diamond split in two") {
    Dag d = diamond();
    TopoOrder order = topological_sort(d);
    BudgetDecomposition dec = decomposition_from_sizes(d, order, std::vector<std::uint32_t>{2, 2});
    SchedulerReport rep = schedule_from_decomposition(d, dec);
    // b1 = 1 (edge 0->1), b2 = 1 (edge 2->3), d = 2, l = 2
    CHECK(rep.space_bound == 1 + 1 + 1 + 1);
    PebbleMetrics m = check_report(d, rep);
    CHECK(m.emptying());
}

TEST_CASE("schedule_from_decomposition: unlinked last part is plain concatenation") {
    // two disjoint diamonds; the second part has no predecessors in the first
    std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 3}, {2, 3}, {4, 5}, {4, 6}, {5, 7}, {6, 7}};
    Dag two = Dag::from_edges(8, edges);
    TopoOrder order = topological_sort(two);
    BudgetDecomposition dec = decomposition_from_sizes(two, order, std::vector<std::uint32_t>{4, 4});
    SchedulerReport rep = schedule_from_decomposition(two, dec);
    PebbleMetrics m = check_report(two, rep);
    // concatenation of the two part schedules: peak is the max of the peaks
    Dag d = diamond();
    SchedulerReport single = topo_schedule(d, topological_sort(d));
    PebbleMetrics sm = simulate(d, single.schedule);
    CHECK(m.peak_pebbles == sm.peak_pebbles);
    CHECK(m.move_count == 2 * sm.move_count);
}

TEST_CASE("schedule_from_decomposition: emptying, full, within bounds on random splits") {
    SplitMix64 rng(202);
    for (int round = 0; round < 120; ++round) {
        std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(30));
        Dag dag = random_dag(n, 4, rng);
        TopoOrder order = topological_sort(dag);
        std::uint32_t parts = 1 + static_cast<std::uint32_t>(rng.below(std::min<std::uint32_t>(4, n)));
        std::vector<std::uint32_t> sizes(parts, 1);
        for (std::uint32_t extra = n - parts; extra > 0; --extra)
            ++sizes[rng.below(parts)];
        BudgetDecomposition dec = decomposition_from_sizes(dag, order, sizes);
        SchedulerReport rep = schedule_from_decomposition(dag, dec);
        PebbleMetrics m = check_report(dag, rep);
        CHECK(m.emptying());
        std::uint32_t d = dag.max_in_degree();
        std::uint64_t bound = dec.boundary_sum() + 1 +
                              static_cast<std::uint64_t>(d > 0 ? d - 1 : 0) * (parts - 1);
        CHECK(m.peak_pebbles <= bound);
    }
}

TEST_CASE("lemma-3 sliding rule: slides into the last part come from earlier parts") {
    SplitMix64 rng(303);
    int slides_seen = 0;
    for (int round = 0; round < 40; ++round) {
        std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.below(16));
        Dag dag = random_dag(n, 3, rng);
        if (dag.max_in_degree() < 2) continue;
        TopoOrder order = topological_sort(dag);
        std::uint32_t first = 1 + static_cast<std::uint32_t>(rng.below(n - 1));
        std::vector<std::uint32_t> sizes{first, n - first};
        BudgetDecomposition dec = decomposition_from_sizes(dag, order, sizes);
        SchedulerReport rep = schedule_from_decomposition(dag, dec);
        check_report(dag, rep);
        std::vector<char> last_part(n, 0);
        for (std::uint32_t i = first; i < n; ++i) last_part[order.order[i]] = 1;
        std::vector<std::uint32_t> rank(n);
        for (std::uint32_t i = 0; i < n; ++i) rank[order.order[i]] = i;
        for (const Move& mv : rep.schedule.materialize()) {
            if (mv.kind != MoveKind::Slide || !last_part[mv.to]) continue;
            CHECK(rank[mv.from] < first);
            ++slides_seen;
        }
    }
    CHECK(slides_seen > 0);
}

TEST_CASE("pipeline: diamond with B >= m") {
    Dag d = diamond();
    SchedulerReport rep = pipeline_decompose_and_schedule(d, Rat(4, 1));
    CHECK(rep.params["parts"] == 1);
    CHECK(rep.space_bound == 5);  // floor(B) + 1 + (d-1)(l-1)
    PebbleMetrics m = check_report(d, rep);
    CHECK(m.peak_pebbles <= 3);
}

TEST_CASE("pipeline: chain of 8 with B = 1 pebbles with one pebble") {
    Dag c = chain(8);
    SchedulerReport rep = pipeline_decompose_and_schedule(c, Rat(1, 1));
    CHECK(rep.space_bound == 1);
    PebbleMetrics m = check_report(c, rep);
    CHECK(m.peak_pebbles == 1);
}

TEST_CASE("pipeline: random layered dags satisfy the claimed bounds") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        InstanceSpec spec;
        spec.family = Family::LayeredRandom;
        spec.layers = 6;
        spec.width = 5;
        spec.degree = 2;
        spec.seed = seed;
        Dag dag = generate(spec).dag;
        Rat budget(dag.edge_count(), 2);
        SchedulerReport rep = pipeline_decompose_and_schedule(dag, budget);
        check_report(dag, rep);
    }
}

TEST_CASE("select_budget matches a brute-force scan over breakpoints") {
    auto cost_feasible = [](std::uint64_t m, std::uint32_t d, std::uint64_t s, std::uint64_t k) {
        // m/k + 1 + (d-1)(2^k - 1) <= s, exactly
        if (k >= 64) return false;
        unsigned __int128 term = static_cast<unsigned __int128>(d - 1) * ((1ull << k) - 1);
        if (term + 1 > s) return false;
        return static_cast<unsigned __int128>(m) <=
               static_cast<unsigned __int128>(k) * (s - 1 - static_cast<std::uint64_t>(term));
    };
    SplitMix64 rng(404);
    for (int round = 0; round < 300; ++round) {
        std::uint64_t m = 1 + rng.below(200);
        std::uint32_t d = 1 + static_cast<std::uint32_t>(rng.below(6));
        std::uint64_t s = 1 + rng.below(3 * m + 10);
        auto got = select_budget(m, d, s);
        std::optional<std::uint64_t> best_k;
        for (std::uint64_t k = 1; k <= m + 64; ++k)
            if (cost_feasible(m, d, s, k)) {
                best_k = k;
                break;
            }
        if (!best_k) {
            CHECK(!got.has_value());
        } else {
            REQUIRE(got.has_value());
            Rat expect(m, *best_k);
            CHECK(got->num().mul(expect.den()).compare(expect.num().mul(got->den())) == 0);
        }
    }
}

TEST_CASE("select_budget spec examples") {
    CHECK(!select_budget(5, 2, 1).has_value());
    // S >= m + d makes B = m feasible
    auto b = select_budget(10, 3, 13);
    REQUIRE(b.has_value());
    CHECK(b->floor_u64_saturating() == 10);
    // m = 16, d = 2, S = cost at B = 4 (= 4 + 1 + 15 = 20): result >= 4
    auto c = select_budget(16, 2, 20);
    REQUIRE(c.has_value());
    CHECK(c->int_ge(4));
}

TEST_CASE("pebble_bounded_degree: small m falls back to the topological schedule") {
    Dag d = diamond();
    SchedulerReport rep = pebble_bounded_degree(d, BoundedDegreeMode::Theorem1);
    CHECK(rep.strategy == "theorem1");
    CHECK(rep.params.contains("fallback"));
    PebbleMetrics m = check_report(d, rep);
    CHECK(m.move_count == 8);
}

TEST_CASE("pebble_bounded_degree: lemma7 precondition violations throw") {
    // star: m = 8, log2 m = 3, d = 8 > log2(m)/3
    std::vector<Edge> edges;
    for (VertexId v = 0; v < 8; ++v) edges.emplace_back(v, 8);
    Dag star = Dag::from_edges(9, edges);
    CHECK_NOTHROW(pebble_bounded_degree(star, BoundedDegreeMode::Theorem1));  // small-m fallback
    CHECK_THROWS_AS(pebble_bounded_degree(star, BoundedDegreeMode::Lemma7), PreconditionError);
}

TEST_CASE("pebble_bounded_degree at m >= 2^12 in both modes") {
    InstanceSpec spec;
    spec.family = Family::LayeredRandom;
    spec.layers = 48;
    spec.width = 80;
    spec.degree = 2;
    spec.seed = 9;
    Dag dag = generate(spec).dag;
    REQUIRE(dag.edge_count() >= 4096);
    REQUIRE(dag.max_in_degree() == 2);
    SchedulerReport t1 = pebble_bounded_degree(dag, BoundedDegreeMode::Theorem1);
    check_report(dag, t1);
    SchedulerReport l7 = pebble_bounded_degree(dag, BoundedDegreeMode::Lemma7);
    PebbleMetrics m = check_report(dag, l7);
    double lg = std::log2(static_cast<double>(dag.edge_count()));
    CHECK(m.peak_pebbles <= 2.8125 * static_cast<double>(dag.edge_count()) / lg);
}

TEST_CASE("pebble_bounded_degree: d = 1 uses one pebble") {
    Dag c = chain(9);
    for (auto mode : {BoundedDegreeMode::Theorem1, BoundedDegreeMode::Lemma7}) {
        SchedulerReport rep = pebble_bounded_degree(c, mode);
        PebbleMetrics m = check_report(c, rep);
        CHECK(m.peak_pebbles == 1);
    }
}

TEST_CASE("challenging_schedule: empty W is exactly the inner schedule") {
    Dag d = diamond();
    SchedulerReport rep = challenging_schedule(
        d, {}, [](const Dag& g) { return topo_schedule(g, topological_sort(g)); });
    SchedulerReport inner = topo_schedule(d, topological_sort(d));
    CHECK(rep.schedule.materialize() == inner.schedule.materialize());
    PebbleMetrics m = check_report(d, rep);
    PebbleMetrics im = simulate(d, inner.schedule);
    CHECK(rep.space_bound == im.peak_pebbles + 0 + d.max_in_degree());
    CHECK(m.move_count == im.move_count);
}

TEST_CASE("challenging_schedule: diamond with W = {sink}") {
    Dag d = diamond();
    SchedulerReport rep = challenging_schedule(
        d, {3}, [](const Dag& g) { return topo_schedule(g, topological_sort(g)); });
    PebbleMetrics m = check_report(d, rep);
    std::uint64_t s_prime = rep.params["S_prime"].get<std::uint64_t>();
    CHECK(m.peak_pebbles <= s_prime + 1 + 2);
}

TEST_CASE("challenging_schedule: W = V pebbles everything and never removes") {
    Dag d = diamond();
    SchedulerReport rep = challenging_schedule(
        d, {0, 1, 2, 3}, [](const Dag& g) { return topo_schedule(g, topological_sort(g)); });
    auto moves = rep.schedule.materialize();
    for (const Move& mv : moves) CHECK(mv.kind == MoveKind::Place);
    PebbleMetrics m = check_report(d, rep);
    CHECK(m.peak_pebbles == 4);
    CHECK(m.final_count == 4);
}

TEST_CASE("challenging_schedule: once pebbled, W vertices stay pebbled") {
    SplitMix64 rng(505);
    for (int round = 0; round < 30; ++round) {
        std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.below(20));
        Dag dag = random_dag(n, 4, rng);
        std::vector<VertexId> w;
        for (VertexId v = 0; v < n; ++v)
            if (rng.below(5) == 0) w.push_back(v);
        SchedulerReport rep = challenging_schedule(
            dag, w, [](const Dag& g) { return topo_schedule(g, topological_sort(g)); });
        std::vector<char> in_w(n, 0);
        for (VertexId v : w) in_w[v] = 1;
        std::vector<char> placed(n, 0);
        for (const Move& mv : rep.schedule.materialize()) {
            if (mv.kind == MoveKind::Remove) {
                CHECK(!(in_w[mv.to] && placed[mv.to]));
            } else {
                if (mv.kind == MoveKind::Slide) CHECK(!(in_w[mv.from] && placed[mv.from]));
                placed[mv.to] = 1;
            }
        }
        check_report(dag, rep);
    }
}

TEST_CASE("challenging_schedule bounds on random (dag, W) pairs") {
    SplitMix64 rng(606);
    for (int round = 0; round < 40; ++round) {
        std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.below(25));
        Dag dag = random_dag(n, 4, rng);
        std::vector<VertexId> w;
        for (VertexId v = 0; v < n && w.size() < 4; ++v)
            if (rng.below(6) == 0) w.push_back(v);
        SchedulerReport rep = challenging_schedule(
            dag, w, [](const Dag& g) { return topo_schedule(g, topological_sort(g)); });
        PebbleMetrics m = check_report(dag, rep);
        std::uint64_t s_prime = rep.params["S_prime"].get<std::uint64_t>();
        std::uint64_t t_prime = rep.params["T_prime"].get<std::uint64_t>();
        CHECK(m.peak_pebbles <= s_prime + w.size() + dag.max_in_degree());
        CHECK(m.move_count <= (w.size() + 1) * (t_prime + n));
    }
}

TEST_CASE("pebble_general examples") {
    SUBCASE("low in-degree graphs have empty W") {
        InstanceSpec spec;
        spec.family = Family::LayeredRandom;
        spec.layers = 8;
        spec.width = 6;
        spec.degree = 2;
        spec.seed = 4;
        Dag dag = generate(spec).dag;
        SchedulerReport rep = pebble_general(dag);
        CHECK(rep.params["W"] == 0);
        check_report(dag, rep);
    }
    SUBCASE("star pulls the hub into W") {
        std::vector<Edge> edges;
        for (VertexId v = 0; v < 19; ++v) edges.emplace_back(v, 19);
        Dag star = Dag::from_edges(20, edges);
        SchedulerReport rep = pebble_general(star);
        CHECK(rep.params["W"] == 1);
        PebbleMetrics m = check_report(star, rep);
        CHECK(m.peak_pebbles == 20);  // all predecessors pebbled at once
    }
    SUBCASE("singleton") {
        Dag s = Dag::from_edges(1, std::vector<Edge>{});
        SchedulerReport rep = pebble_general(s);
        CHECK(rep.schedule.materialize() ==
              std::vector<Move>{Move::place(0), Move::remove(0)});
    }
}

TEST_CASE("depth_recursive_schedule examples") {
    {
        Dag c = chain(5);
        SchedulerReport rep = depth_recursive_schedule(c);
        CHECK(rep.space_bound == 1);
        PebbleMetrics m = check_report(c, rep);
        CHECK(m.peak_pebbles == 1);
    }
    {
        InstanceSpec spec;
        spec.family = Family::BinaryInTree;
        spec.n = 7;
        Dag t = generate(spec).dag;
        CHECK(topological_depth(t) == 2);
        SchedulerReport rep = depth_recursive_schedule(t);
        CHECK(rep.space_bound == 3);
        PebbleMetrics m = check_report(t, rep);
        CHECK(m.peak_pebbles <= 3);
    }
    {
        Dag s = Dag::from_edges(1, std::vector<Edge>{});
        SchedulerReport rep = depth_recursive_schedule(s);
        CHECK(rep.space_bound == 1);
        check_report(s, rep);
    }
}

TEST_CASE("pebble_by_depth: concrete m=16, l=4, d=8 instance") {
    // path of depth 4 plus a hub with 8 predecessors and filler edges
    std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    for (VertexId v = 5; v < 12; ++v) edges.emplace_back(v, 12);
    edges.emplace_back(0, 12);
    edges.emplace_back(5, 13);
    edges.emplace_back(6, 13);
    edges.emplace_back(7, 14);
    edges.emplace_back(8, 14);
    Dag dag = Dag::from_edges(15, edges);
    REQUIRE(dag.edge_count() == 16);
    REQUIRE(topological_depth(dag) == 4);
    REQUIRE(dag.max_in_degree() == 8);
    SchedulerReport rep = pebble_by_depth(dag);
    CHECK(rep.space_bound == 2 * 8 - 4 + 1 + 8);
    PebbleMetrics m = check_report(dag, rep);
    CHECK(m.peak_pebbles <= 21);
}

TEST_CASE("pebble_by_depth: chain falls back to the classic schedule") {
    Dag c = chain(9);
    SchedulerReport rep = pebble_by_depth(c);
    CHECK(rep.strategy == "theorem4");
    CHECK(rep.params.contains("fallback"));
    PebbleMetrics m = check_report(c, rep);
    CHECK(m.peak_pebbles == 1);
}

TEST_CASE("pebble_by_depth: single vertex") {
    Dag s = Dag::from_edges(1, std::vector<Edge>{});
    SchedulerReport rep = pebble_by_depth(s);
    CHECK(rep.schedule.materialize() ==
          std::vector<Move>{Move::place(0), Move::remove(0)});
    check_report(s, rep);
}

TEST_CASE("pebble_with_separator: singleton, grid, disconnected") {
    SUBCASE("singleton") {
        Dag s = Dag::from_edges(1, std::vector<Edge>{});
        SchedulerReport rep = pebble_with_separator(s, brute_force_separator);
        CHECK(rep.schedule.materialize() ==
              std::vector<Move>{Move::place(0), Move::remove(0)});
    }
    SUBCASE("3x3 grid with the brute-force separator") {
        InstanceSpec spec;
        spec.family = Family::Grid;
        spec.rows = 3;
        spec.cols = 3;
        Dag g = generate(spec).dag;
        SchedulerReport rep = pebble_with_separator(g, brute_force_separator);
        PebbleMetrics m = check_report(g, rep);
        double s_closed =
            6.0 * (std::sqrt(2.0) + std::sqrt(3.0)) * (1 + std::sqrt(2.0 / 3.0)) * 3.0 + 2;
        CHECK(m.peak_pebbles <= s_closed);
    }
    SUBCASE("disconnected components are pebbled one at a time") {
        std::vector<Edge> edges{{0, 1}, {1, 2}, {3, 4}, {4, 5}};
        Dag two = Dag::from_edges(6, edges);
        SchedulerReport rep = pebble_with_separator(two, brute_force_separator);
        PebbleMetrics m = check_report(two, rep);
        Dag c = chain(3);
        PebbleMetrics cm = simulate(c, topo_schedule(c, topological_sort(c)).schedule);
        CHECK(m.peak_pebbles == cm.peak_pebbles);
    }
}

TEST_CASE("pebble_with_separator rejects contract violations") {
    Dag c = chain(8);
    SeparatorOracle broken = [](const Dag& g) {
        SeparatorResult r;
        for (VertexId v = 0; v + 1 < g.vertex_count(); ++v) r.left.push_back(v);
        r.right.push_back(g.vertex_count() - 1);
        return r;
    };
    CHECK_THROWS_AS(pebble_with_separator(c, broken), SeparatorContractError);
}

TEST_CASE("master property across every strategy on random graphs") {
    SplitMix64 rng(707);
    for (int round = 0; round < 25; ++round) {
        std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(18));
        Dag dag = random_dag(n, 4, rng);
        check_report(dag, topo_schedule(dag, topological_sort(dag)));
        check_report(dag,
                     pipeline_decompose_and_schedule(dag, Rat(1 + rng.below(dag.edge_count() + 2), 1)));
        check_report(dag, pebble_general(dag));
        check_report(dag, depth_recursive_schedule(dag));
        check_report(dag, pebble_by_depth(dag));
        check_report(dag, pebble_with_separator(dag, [](const Dag& g) {
                         return g.vertex_count() <= 10 ? brute_force_separator(g)
                                                       : heuristic_separator(g);
                     }));
    }
}

TEST_CASE("d = 1 forests of chains: peak exactly 1") {
    SplitMix64 rng(808);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t chains = 1 + static_cast<std::uint32_t>(rng.below(4));
        std::vector<Edge> edges;
        std::uint32_t n = 0;
        for (std::uint32_t c = 0; c < chains; ++c) {
            std::uint32_t len = 1 + static_cast<std::uint32_t>(rng.below(6));
            for (std::uint32_t i = 0; i + 1 < len; ++i) edges.emplace_back(n + i, n + i + 1);
            n += len;
        }
        Dag dag = Dag::from_edges(n, edges);
        SchedulerReport rep = pipeline_decompose_and_schedule(dag, Rat(1, 1));
        PebbleMetrics m = check_report(dag, rep);
        CHECK(m.peak_pebbles == 1);
        CHECK(m.move_count <= 2ull * n);
    }
}
