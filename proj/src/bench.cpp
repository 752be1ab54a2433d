#include "pebble/bench.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "pebble/oracle.hpp"

namespace pebble {

namespace {

SchedulerReport run_strategy(const std::string& name, const Dag& dag) {
    if (name == "topo") return topo_schedule(dag, topological_sort(dag));
    if (name.rfind("pipeline", 0) == 0) {
        Rat budget(dag.edge_count(), 1);
        auto colon = name.find(':');
        if (colon != std::string::npos) budget = Rat::parse(name.substr(colon + 1));
        return pipeline_decompose_and_schedule(dag, budget);
    }
    if (name == "theorem1") return pebble_bounded_degree(dag, BoundedDegreeMode::Theorem1);
    if (name == "lemma7") return pebble_bounded_degree(dag, BoundedDegreeMode::Lemma7);
    if (name == "general") return pebble_general(dag);
    if (name == "depth-classic") return depth_recursive_schedule(dag);
    if (name == "theorem4") return pebble_by_depth(dag);
    if (name == "separator") {
        return pebble_with_separator(dag, [](const Dag& g) {
            return g.vertex_count() <= 10 ? brute_force_separator(g) : heuristic_separator(g);
        });
    }
    throw PreconditionError("unknown strategy: " + name);
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<std::string>& strategies,
                                const std::vector<InstanceSpec>& instances) {
    std::vector<BenchRow> rows;
    for (const auto& spec : instances) {
        NamedDag g = generate(spec);
        double n = g.dag.vertex_count();
        double m = static_cast<double>(g.dag.edge_count());
        for (const auto& strategy : strategies) {
            BenchRow row;
            row.strategy = strategy;
            row.instance = spec.label();
            row.n = g.dag.vertex_count();
            row.m = g.dag.edge_count();
            row.d = g.dag.max_in_degree();
            row.bound_general = m > 1 ? m / std::log2(m) + g.dag.max_in_degree() : 1 + g.dag.max_in_degree();
            row.bound_loui = n > 1 ? 3.0 * g.dag.max_in_degree() * n / std::log2(n) + 4 : 5;
            auto start = std::chrono::steady_clock::now();
            try {
                SchedulerReport rep = run_strategy(strategy, g.dag);
                PebbleMetrics metrics = simulate(g.dag, rep.schedule);
                row.ok = true;
                row.space_bound = rep.space_bound;
                row.peak = metrics.peak_pebbles;
                row.moves = metrics.move_count;
                row.time_bound = rep.time_bound.to_string();
                if (metrics.peak_pebbles > rep.space_bound)
                    row.skip_reason = "BOUND VIOLATION";  // surfaced, never silently dropped
            } catch (const std::exception& e) {
                row.ok = false;
                row.skip_reason = e.what();
            }
            row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "strategy,family,n,m,d,S_bound,peak,T_bound,moves,ms\n";
    for (const auto& r : rows) {
        out << r.strategy << ',' << r.instance << ',' << r.n << ',' << r.m << ',' << r.d << ',';
        if (r.ok)
            out << r.space_bound << ',' << r.peak << ',' << r.time_bound << ',' << r.moves << ','
                << r.millis;
        else
            out << "skipped(" << r.skip_reason << "),,,," << r.millis;
        out << '\n';
    }
    return out.str();
}

}  // namespace pebble
