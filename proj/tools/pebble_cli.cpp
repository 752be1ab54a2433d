// Command-line surface: generation, decomposition, scheduling, verification,
// statistics, exact oracles, and the benchmark table.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pebble/bench.hpp"
#include "pebble/io.hpp"
#include "pebble/oracle.hpp"
#include "pebble/schedulers.hpp"

namespace {

using namespace pebble;

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

InstanceSpec spec_from_options(const std::string& family, std::uint32_t n, std::uint32_t height,
                               std::uint32_t rows, std::uint32_t cols, std::uint32_t layers,
                               std::uint32_t width, std::uint32_t degree, double hub_fraction,
                               double avg_degree, std::uint64_t seed) {
    InstanceSpec spec;
    spec.family = family_from_name(family);
    spec.n = n;
    spec.height = height;
    spec.rows = rows;
    spec.cols = cols;
    spec.layers = layers;
    spec.width = width;
    spec.degree = degree;
    spec.hub_fraction = hub_fraction;
    spec.avg_degree = avg_degree;
    spec.seed = seed;
    return spec;
}

// "family:key=value,key=value" rows for bench.
InstanceSpec parse_instance_spec(const std::string& text) {
    auto colon = text.find(':');
    InstanceSpec spec;
    spec.family = family_from_name(text.substr(0, colon));
    if (colon == std::string::npos) return spec;
    std::istringstream in(text.substr(colon + 1));
    std::string kv;
    while (std::getline(in, kv, ',')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw PreconditionError("bad instance parameter: " + kv);
        std::string key = kv.substr(0, eq);
        std::string value = kv.substr(eq + 1);
        if (key == "n") spec.n = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "height") spec.height = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "rows") spec.rows = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "cols") spec.cols = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "layers") spec.layers = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "width") spec.width = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "degree") spec.degree = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "hub-fraction") spec.hub_fraction = std::stod(value);
        else if (key == "avg-degree") spec.avg_degree = std::stod(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else throw PreconditionError("unknown instance parameter: " + key);
    }
    return spec;
}

SchedulerReport make_report(const std::string& strategy, const Dag& dag, const std::string& budget,
                            const std::string& separator_method) {
    if (strategy == "topo") return topo_schedule(dag, topological_sort(dag));
    if (strategy == "pipeline") {
        Rat b = budget.empty() ? Rat(dag.edge_count(), 1) : Rat::parse(budget);
        return pipeline_decompose_and_schedule(dag, b);
    }
    if (strategy == "theorem1") return pebble_bounded_degree(dag, BoundedDegreeMode::Theorem1);
    if (strategy == "lemma7") return pebble_bounded_degree(dag, BoundedDegreeMode::Lemma7);
    if (strategy == "general") return pebble_general(dag);
    if (strategy == "depth-classic") return depth_recursive_schedule(dag);
    if (strategy == "theorem4") return pebble_by_depth(dag);
    if (strategy == "separator") {
        SeparatorOracle oracle;
        if (separator_method == "brute")
            oracle = brute_force_separator;
        else if (separator_method == "heuristic")
            oracle = heuristic_separator;
        else
            oracle = [](const Dag& g) {
                return g.vertex_count() <= 10 ? brute_force_separator(g) : heuristic_separator(g);
            };
        return pebble_with_separator(dag, oracle);
    }
    throw PreconditionError("unknown strategy: " + strategy);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pebbling schedules for DAGs: budget decompositions, challenging vertices, exact oracles"};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "generate an instance as an edge list");
    std::string gen_family = "chain";
    std::uint32_t gen_n = 8, gen_height = 3, gen_rows = 4, gen_cols = 4, gen_layers = 4,
                  gen_width = 5, gen_degree = 2;
    double gen_hub = 0.05, gen_avg = 2.0;
    std::uint64_t gen_seed = 1;
    gen->add_option("--family", gen_family,
                    "chain|pyramid|grid|binary-in-tree|butterfly|layered-random|heavy-tail-random");
    gen->add_option("--n", gen_n, "vertex count (chain, binary-in-tree, heavy-tail-random)");
    gen->add_option("--height", gen_height, "pyramid height");
    gen->add_option("--rows", gen_rows, "grid rows");
    gen->add_option("--cols", gen_cols, "grid cols");
    gen->add_option("--layers", gen_layers, "layered-random layers / butterfly log-size");
    gen->add_option("--width", gen_width, "layered-random width");
    gen->add_option("--degree", gen_degree, "layered-random max in-degree");
    gen->add_option("--hub-fraction", gen_hub, "heavy-tail hub fraction");
    gen->add_option("--avg-degree", gen_avg, "heavy-tail average in-degree target");
    gen->add_option("--seed", gen_seed, "random seed");

    // --- stats ---
    auto* stats = app.add_subcommand("stats", "graph statistics");
    std::string stats_input = "-";
    stats->add_option("input", stats_input, "edge-list or DOT file (- for stdin)");

    // --- decompose ---
    auto* dec = app.add_subcommand("decompose", "budget decomposition as JSON");
    std::string dec_input = "-", dec_budget = "0";
    std::uint32_t dec_merge = 0;
    dec->add_option("input", dec_input, "edge-list or DOT file (- for stdin)");
    dec->add_option("--budget", dec_budget, "budget B as integer, p/q, or decimal");
    dec->add_option("--merge", dec_merge, "merge parts smaller than this size");

    // --- schedule ---
    auto* sch = app.add_subcommand("schedule", "construct a schedule and report bounds");
    std::string sch_input = "-", sch_strategy = "general", sch_budget, sch_sep = "auto";
    bool sch_emit = false;
    std::uint64_t sch_cap = 10'000'000;
    sch->add_option("input", sch_input, "edge-list or DOT file (- for stdin)");
    sch->add_option("--strategy", sch_strategy,
                    "topo|pipeline|theorem1|lemma7|general|depth-classic|theorem4|separator");
    sch->add_option("--budget", sch_budget, "budget for --strategy pipeline");
    sch->add_option("--separator", sch_sep, "separator oracle: auto|brute|heuristic");
    sch->add_flag("--emit-moves", sch_emit, "print the schedule text instead of the JSON report");
    sch->add_option("--max-moves", sch_cap, "cap for --emit-moves");

    // --- verify ---
    auto* ver = app.add_subcommand("verify", "verify a schedule against a graph");
    std::string ver_input = "-", ver_schedule;
    ver->add_option("input", ver_input, "edge-list or DOT file (- for stdin)");
    ver->add_option("--schedule", ver_schedule, "schedule text file")->required();

    // --- oracle ---
    auto* orc = app.add_subcommand("oracle", "exact computations for small graphs");
    std::string orc_input = "-", orc_what = "optimal";
    std::uint64_t orc_states = 50'000'000;
    std::uint64_t orc_timeout = 60'000;
    orc->add_option("input", orc_input, "edge-list or DOT file (- for stdin)");
    orc->add_option("--what", orc_what, "optimal|separator-brute|separator-heuristic");
    orc->add_option("--max-states", orc_states, "state cap for the search");
    orc->add_option("--timeout-ms", orc_timeout, "wall-clock cap for the search");

    // --- bench ---
    auto* ben = app.add_subcommand("bench", "benchmark table over strategies and instances");
    std::vector<std::string> ben_strategies{"topo", "general"};
    std::vector<std::string> ben_instances{"grid:rows=8,cols=8"};
    bool ben_context = false;
    ben->add_option("--strategies", ben_strategies, "strategy names")->delimiter(',');
    ben->add_option("--instances", ben_instances, "family:key=value,... (repeatable)");
    ben->add_flag("--context-bounds", ben_context, "print the closed-form comparator columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) {
            NamedDag g = generate(spec_from_options(gen_family, gen_n, gen_height, gen_rows, gen_cols,
                                                    gen_layers, gen_width, gen_degree, gen_hub,
                                                    gen_avg, gen_seed));
            std::cout << emit_edge_list(g);
            return 0;
        }
        if (*stats) {
            NamedDag g = parse_dag(read_input(stats_input));
            TopoOrder order = topological_sort(g.dag);
            BoundaryProfile prof = boundary_profile(g.dag, order);
            nlohmann::json out{{"n", g.dag.vertex_count()},
                               {"m", g.dag.edge_count()},
                               {"d", g.dag.max_in_degree()},
                               {"d_avg", g.dag.avg_in_degree()},
                               {"depth", topological_depth(g.dag)},
                               {"boundary", prof.max_value},
                               {"boundary_argmax", prof.argmax}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*dec) {
            NamedDag g = parse_dag(read_input(dec_input));
            TopoOrder order = topological_sort(g.dag);
            BudgetDecomposition d = decompose(g.dag, order, Rat::parse(dec_budget));
            if (dec_merge >= 2) d = merge_small_parts(std::move(d), dec_merge);
            std::cout << decomposition_to_json(d, g.names).dump(2) << "\n";
            return 0;
        }
        if (*sch) {
            NamedDag g = parse_dag(read_input(sch_input));
            SchedulerReport rep = make_report(sch_strategy, g.dag, sch_budget, sch_sep);
            if (sch_emit) {
                std::cout << format_schedule(rep.schedule, g.names, sch_cap);
                return 0;
            }
            PebbleMetrics metrics = simulate(g.dag, rep.schedule);
            std::cout << report_to_json(rep, metrics).dump(2) << "\n";
            bool ok = verify_full(g.dag, rep.schedule).legal_and_full() &&
                      metrics.peak_pebbles <= rep.space_bound &&
                      rep.time_bound.holds_for(metrics.move_count);
            return ok ? 0 : 1;
        }
        if (*ver) {
            NamedDag g = parse_dag(read_input(ver_input));
            Schedule s = parse_schedule(read_input(ver_schedule), g);
            Verdict v = verify_full(g.dag, s);
            switch (v.kind) {
                case Verdict::Kind::LegalAndFull: {
                    PebbleMetrics metrics = simulate(g.dag, s);
                    std::cout << "legal-and-full\n" << metrics_to_json(metrics, g.names).dump(2) << "\n";
                    return 0;
                }
                case Verdict::Kind::LegalNotFull:
                    std::cout << "legal-not-full\n";
                    return 1;
                case Verdict::Kind::Illegal:
                    std::cout << "illegal at move " << v.move_index << ": " << to_string(v.reason)
                              << "\n";
                    return 1;
            }
        }
        if (*orc) {
            NamedDag g = parse_dag(read_input(orc_input));
            if (orc_what == "optimal") {
                SearchBudget budget;
                budget.max_states = orc_states;
                budget.timeout = std::chrono::milliseconds(orc_timeout);
                OptimalResult r = optimal_pebbles(g.dag, budget);
                if (r.known) {
                    std::cout << nlohmann::json{{"optimal", r.pebbles}}.dump() << "\n";
                    return 0;
                }
                std::cout << nlohmann::json{{"unknown", r.limit}}.dump() << "\n";
                return 1;
            }
            SeparatorResult sep = orc_what == "separator-brute" ? brute_force_separator(g.dag)
                                                                : heuristic_separator(g.dag);
            check_separator_contract(g.dag, sep, 0);
            auto names_of = [&](const std::vector<VertexId>& vs) {
                nlohmann::json arr = nlohmann::json::array();
                for (VertexId v : vs) arr.push_back(g.names[v]);
                return arr;
            };
            std::cout << nlohmann::json{{"left", names_of(sep.left)},
                                        {"separator", names_of(sep.separator)},
                                        {"right", names_of(sep.right)}}
                             .dump(2)
                      << "\n";
            return 0;
        }
        if (*ben) {
            std::vector<InstanceSpec> specs;
            for (const auto& text : ben_instances) specs.push_back(parse_instance_spec(text));
            auto rows = run_bench(ben_strategies, specs);
            std::cout << bench_csv(rows);
            if (ben_context) {
                std::cout << "# context: m/log2(m)+d and Loui 3dn/log2(n)+4 per instance\n";
                std::string last;
                for (const auto& r : rows)
                    if (r.instance != last) {
                        std::cout << "# " << r.instance << ": general=" << r.bound_general
                                  << " loui=" << r.bound_loui << "\n";
                        last = r.instance;
                    }
            }
            bool all_ok = true;
            for (const auto& r : rows) all_ok = all_ok && (r.ok && r.skip_reason.empty());
            return all_ok ? 0 : 1;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const CycleError& e) {
        std::cerr << "cycle error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
