#include "pebble/decomposition.hpp"

#include <algorithm>
#include <numeric>

namespace pebble {

std::uint64_t BudgetDecomposition::boundary_sum() const {
    std::uint64_t s = 0;
    for (const auto& p : parts) s += p.boundary;
    return s;
}

std::vector<VertexId> BudgetDecomposition::concatenated_order() const {
    std::vector<VertexId> out;
    for (const auto& p : parts) out.insert(out.end(), p.segment.begin(), p.segment.end());
    return out;
}

namespace {

struct DecomposeState {
    const std::vector<VertexId>& order;
    SegmentScanner& scanner;
    std::vector<DecompositionPart>& parts;
    DecomposeTrace* trace;
};

// Window [lo, hi) of the parent order, with its local budget.
void decompose_window(DecomposeState& st, std::uint32_t lo, std::uint32_t hi, const Rat& budget,
                      std::uint32_t depth) {
    if (st.trace) st.trace->max_depth = std::max(st.trace->max_depth, depth);
    std::span<const VertexId> window(st.order.data() + lo, hi - lo);
    SegmentScan scan = st.scanner.scan(window);
    if (budget.int_ge(scan.max_boundary)) {
        st.parts.push_back({std::vector<VertexId>(window.begin(), window.end()), scan.max_boundary});
        return;
    }
    // max_boundary > budget >= 0, so the argmax is a proper split point.
    std::uint32_t cut = lo + scan.argmax;
    std::span<const VertexId> prefix(st.order.data() + lo, cut - lo);
    std::span<const VertexId> suffix(st.order.data() + cut, hi - cut);
    SegmentScan pre = st.scanner.scan(prefix);
    SegmentScan suf = st.scanner.scan(suffix);
    std::uint64_t mp = pre.edge_count, ms = suf.edge_count;
    if (st.trace) st.trace->splits.push_back({depth, scan.edge_count, mp, ms, budget});
    if (mp + ms == 0) {
        // Both halves edgeless: boundary 0 fits any budget, no proportional
        // split to compute.
        st.parts.push_back({std::vector<VertexId>(prefix.begin(), prefix.end()), 0});
        st.parts.push_back({std::vector<VertexId>(suffix.begin(), suffix.end()), 0});
        if (st.trace) st.trace->max_depth = std::max(st.trace->max_depth, depth + 1);
        return;
    }
    decompose_window(st, lo, cut, budget.scaled(mp, mp + ms), depth + 1);
    decompose_window(st, cut, hi, budget.scaled(ms, mp + ms), depth + 1);
}

}  // namespace

BudgetDecomposition decompose(const Dag& dag, const TopoOrder& order, Rat budget, DecomposeTrace* trace) {
    BudgetDecomposition out{dag, budget, {}};
    if (order.order.size() != dag.vertex_count()) throw GraphError("order mismatch: wrong length");
    SegmentScanner scanner(dag);
    DecomposeState st{order.order, scanner, out.parts, trace};
    decompose_window(st, 0, dag.vertex_count(), budget, 0);
    return out;
}

BudgetDecomposition merge_small_parts(BudgetDecomposition decomp, std::uint32_t d) {
    if (d < 2 || decomp.parts.size() < 2) return decomp;
    SegmentScanner scanner(decomp.dag);
    auto& parts = decomp.parts;
    std::size_t i = 0;
    while (i + 1 < parts.size()) {
        if (parts[i].segment.size() >= d) {
            ++i;
            continue;
        }
        auto& left = parts[i];
        auto& right = parts[i + 1];
        left.segment.insert(left.segment.end(), right.segment.begin(), right.segment.end());
        left.boundary = scanner.scan(left.segment).max_boundary;
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        // The merged part may still be small; retry at the same index.
    }
    return decomp;
}

BudgetDecomposition decomposition_from_sizes(const Dag& dag, const TopoOrder& order,
                                             std::span<const std::uint32_t> sizes) {
    std::uint64_t total = std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
    if (total != dag.vertex_count()) throw GraphError("segment sizes do not cover the order");
    BudgetDecomposition out{dag, Rat(), {}};
    SegmentScanner scanner(dag);
    std::uint32_t at = 0;
    std::uint64_t sum = 0;
    for (std::uint32_t sz : sizes) {
        if (sz == 0) throw GraphError("empty segment");
        std::span<const VertexId> seg(order.order.data() + at, sz);
        std::uint32_t b = scanner.scan(seg).max_boundary;
        out.parts.push_back({std::vector<VertexId>(seg.begin(), seg.end()), b});
        sum += b;
        at += sz;
    }
    out.budget = Rat(sum, 1);
    return out;
}

}  // namespace pebble
