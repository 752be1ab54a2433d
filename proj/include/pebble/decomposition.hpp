#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pebble/bigint.hpp"
#include "pebble/dag.hpp"

namespace pebble {

struct DecompositionPart {
    std::vector<VertexId> segment;  // contiguous slice of the parent order
    std::uint32_t boundary = 0;     // max boundary of the induced sub-DAG under the segment order
};

// An ordered split of a topological order into segments whose induced
// boundaries sum to at most the budget. Keeps a handle on the graph so part
// boundaries can be recomputed after merging.
struct BudgetDecomposition {
    Dag dag;
    Rat budget;
    std::vector<DecompositionPart> parts;

    std::size_t part_count() const { return parts.size(); }
    std::uint64_t boundary_sum() const;
    std::vector<VertexId> concatenated_order() const;
};

// Per-split instrumentation for the recursion-shape checks.
struct DecomposeTrace {
    struct Split {
        std::uint32_t depth = 0;           // root at 0
        std::uint64_t window_edges = 0;    // m_H
        std::uint64_t prefix_edges = 0;    // m_p
        std::uint64_t suffix_edges = 0;    // m_s
        Rat window_budget;                 // B_H
    };
    std::uint32_t max_depth = 0;  // deepest node of the call tree reached
    std::vector<Split> splits;
};

// The recursive budget-split: stop when the window's maximum boundary fits
// the local budget, else split at the lowest argmax and hand each child a
// budget proportional to its edge count. B = 0 is allowed; both halves of a
// split strictly shrink, so the recursion always terminates.
BudgetDecomposition decompose(const Dag& dag, const TopoOrder& order, Rat budget,
                              DecomposeTrace* trace = nullptr);

// Iteratively merges the leftmost part with fewer than d vertices into its
// right neighbor until every part except possibly the last has at least d
// vertices. Boundaries are recomputed exactly on merged segments. d <= 1 is a
// no-op.
BudgetDecomposition merge_small_parts(BudgetDecomposition decomp, std::uint32_t d);

// Builds a decomposition from explicit cut sizes (for tests and the CLI); the
// budget is set to the exact boundary sum.
BudgetDecomposition decomposition_from_sizes(const Dag& dag, const TopoOrder& order,
                                             std::span<const std::uint32_t> sizes);

}  // namespace pebble
