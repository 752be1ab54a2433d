#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "pebble/vendor_json.hpp"

#include "pebble/bigint.hpp"
#include "pebble/dag.hpp"
#include "pebble/decomposition.hpp"
#include "pebble/schedule.hpp"

namespace pebble {

// Claimed move-count bound. Large constructions (budget splits with tiny B)
// produce doubly-exponential closed forms; those are reported unclaimed
// rather than rounded.
struct TimeBound {
    bool claimed = false;
    Rat value;

    static TimeBound none() { return {}; }
    static TimeBound exact(std::uint64_t v) { return {true, Rat(v, 1)}; }
    static TimeBound rational(Rat v) { return {true, std::move(v)}; }

    bool holds_for(std::uint64_t moves) const { return !claimed || value.int_ge(moves); }
    std::string to_string() const { return claimed ? value.to_string() : "unclaimed"; }
};

struct SchedulerReport {
    Schedule schedule;
    std::uint64_t space_bound = 0;
    TimeBound time_bound;
    std::string strategy;
    nlohmann::json params;
};

// Lemma-2 topological order strategy: place each vertex in order, drop every
// pebble whose successors are all behind. Exactly 2n moves, peak b(G,phi)+1,
// emptying.
SchedulerReport topo_schedule(const Dag& dag, const TopoOrder& order);

// Lemma-3 inductive construction over the decomposition's parts. Peak at most
// sum(b_i) + 1 + (d-1)(l-1); emptying and full. A single part reduces to
// topo_schedule; graphs with max in-degree <= 1 use the one-pebble walk.
SchedulerReport schedule_from_decomposition(const Dag& dag, const BudgetDecomposition& decomp);

// decompose -> merge_small_parts(d) -> schedule_from_decomposition, with the
// Lemma-5 closed-form move bound claimed when it is representable.
SchedulerReport pipeline_decompose_and_schedule(const Dag& dag, const Rat& budget);

// Maximum budget B = m/k whose Lemma-5 space cost fits in S, or nullopt.
std::optional<Rat> select_budget(std::uint64_t m, std::uint32_t d, std::uint64_t s);

enum class BoundedDegreeMode { Theorem1, Lemma7 };

// Budget pipeline with the mode's budget choice: B = m/(log2 m - 3 log2 log2 m)
// for Theorem1 (small m falls back to the plain topological schedule),
// B = 2m/log2 m for Lemma7. Throws PreconditionError when the in-degree
// precondition fails (callers are expected to use pebble_general then).
SchedulerReport pebble_bounded_degree(const Dag& dag, BoundedDegreeMode mode);

// Lemma-6 challenging-vertices composition. `inner` builds a schedule for the
// reduced graph (local dense ids); W is pebbled one vertex at a time in
// topological order and kept pebbled. Peak at most S' + |W| + d.
SchedulerReport challenging_schedule(const Dag& dag, std::vector<VertexId> challenging,
                                     const std::function<SchedulerReport(const Dag&)>& inner);

// Theorem-2 composition: W = vertices with in-degree above log2 m, inner =
// bounded-degree pipeline with fallbacks.
SchedulerReport pebble_general(const Dag& dag);

// Classic depth recursion: pebble every predecessor, slide from the last one,
// unpebble. Peak at most l(d-1)+1.
SchedulerReport depth_recursive_schedule(const Dag& dag);

// Theorem-4: W = vertices with in-degree >= sqrt(m/l), inner = the classic
// depth recursion on the reduced graph; falls back to the classic schedule
// whenever the Theorem-4 bound is not an improvement.
SchedulerReport pebble_by_depth(const Dag& dag);

struct SeparatorResult {
    std::vector<VertexId> left;
    std::vector<VertexId> separator;
    std::vector<VertexId> right;
};

using SeparatorOracle = std::function<SeparatorResult(const Dag&)>;

// Throws SeparatorContractError unless the partition covers V, has no edge
// between left and right in either direction, and 3*max(|L|,|R|) <= 2n.
void check_separator_contract(const Dag& dag, const SeparatorResult& sep, int level);

// Theorem-3 recursion: W = separator + high-in-degree vertices, components of
// the remainder pebbled one at a time by recursive calls, composed with the
// challenging-vertices construction. The report's space bound is evaluated
// from the separator sizes actually encountered; params carry a "certified"
// flag that is true when every level satisfied |V_S| <= 2*sqrt(2)*sqrt(n).
SchedulerReport pebble_with_separator(const Dag& dag, const SeparatorOracle& oracle);

// Report (without the schedule) as JSON, with measured metrics attached.
nlohmann::json report_to_json(const SchedulerReport& report, const PebbleMetrics& metrics);

}  // namespace pebble
