#include "pebble/dag.hpp"

#include <algorithm>
#include <queue>

namespace pebble {

namespace {

// Finds one directed cycle in a graph known to have no topological order.
std::vector<VertexId> find_cycle(std::uint32_t n, const std::vector<std::vector<VertexId>>& succ) {
    std::vector<std::uint8_t> state(n, 0);  // 0 unseen, 1 on stack, 2 done
    std::vector<VertexId> parent(n, UINT32_MAX);
    for (VertexId start = 0; start < n; ++start) {
        if (state[start] != 0) continue;
        std::vector<std::pair<VertexId, std::size_t>> stack{{start, 0}};
        state[start] = 1;
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            if (idx < succ[v].size()) {
                VertexId w = succ[v][idx++];
                if (state[w] == 1) {
                    std::vector<VertexId> cycle{w};
                    for (VertexId x = v; x != w; x = parent[x]) cycle.push_back(x);
                    cycle.push_back(w);
                    std::reverse(cycle.begin(), cycle.end());
                    return cycle;
                }
                if (state[w] == 0) {
                    state[w] = 1;
                    parent[w] = v;
                    stack.emplace_back(w, 0);
                }
            } else {
                state[v] = 2;
                stack.pop_back();
            }
        }
    }
    return {};
}

}  // namespace

Dag Dag::from_edges(std::uint32_t vertex_count, std::span<const Edge> edges) {
    if (vertex_count == 0) throw GraphError("empty graph (n = 0) is not allowed");
    auto data = std::make_shared<Data>();
    data->n = vertex_count;
    data->succ.resize(vertex_count);
    data->pred.resize(vertex_count);
    for (const auto& [u, v] : edges) {
        if (u >= vertex_count || v >= vertex_count)
            throw GraphError("edge endpoint out of range: (" + std::to_string(u) + ", " + std::to_string(v) + ")");
        if (u == v) throw GraphError("self-loop on vertex " + std::to_string(u));
        data->succ[u].push_back(v);
        data->pred[v].push_back(u);
    }
    data->m = edges.size();
    for (VertexId v = 0; v < vertex_count; ++v) {
        auto& s = data->succ[v];
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw GraphError("duplicate edge out of vertex " + std::to_string(v));
        auto& p = data->pred[v];
        std::sort(p.begin(), p.end());
        data->max_in = std::max<std::uint32_t>(data->max_in, static_cast<std::uint32_t>(p.size()));
    }
    // Acyclicity via Kahn count-down.
    std::vector<std::uint32_t> indeg(vertex_count);
    std::uint32_t seen = 0;
    std::vector<VertexId> queue;
    for (VertexId v = 0; v < vertex_count; ++v) {
        indeg[v] = static_cast<std::uint32_t>(data->pred[v].size());
        if (indeg[v] == 0) queue.push_back(v);
    }
    while (!queue.empty()) {
        VertexId v = queue.back();
        queue.pop_back();
        ++seen;
        for (VertexId w : data->succ[v])
            if (--indeg[w] == 0) queue.push_back(w);
    }
    if (seen != vertex_count) throw CycleError("edge set contains a directed cycle", find_cycle(vertex_count, data->succ));
    return Dag(std::move(data));
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    out.reserve(d_->m);
    for (VertexId v = 0; v < d_->n; ++v)
        for (VertexId w : d_->succ[v]) out.emplace_back(v, w);
    return out;
}

TopoOrder topological_sort(const Dag& dag) {
    std::uint32_t n = dag.vertex_count();
    std::vector<std::uint32_t> indeg(n);
    std::priority_queue<VertexId, std::vector<VertexId>, std::greater<VertexId>> ready;
    for (VertexId v = 0; v < n; ++v) {
        indeg[v] = dag.in_degree(v);
        if (indeg[v] == 0) ready.push(v);
    }
    TopoOrder out;
    out.order.reserve(n);
    out.rank.assign(n, 0);
    while (!ready.empty()) {
        VertexId v = ready.top();
        ready.pop();
        out.rank[v] = static_cast<std::uint32_t>(out.order.size());
        out.order.push_back(v);
        for (VertexId w : dag.succs(v))
            if (--indeg[w] == 0) ready.push(w);
    }
    // Construction guarantees acyclicity, so the sort always completes.
    return out;
}

TopoOrder topo_order_from(const Dag& dag, std::vector<VertexId> order) {
    std::uint32_t n = dag.vertex_count();
    if (order.size() != n) throw GraphError("order mismatch: wrong length");
    TopoOrder out;
    out.rank.assign(n, UINT32_MAX);
    for (std::uint32_t i = 0; i < n; ++i) {
        VertexId v = order[i];
        if (v >= n || out.rank[v] != UINT32_MAX) throw GraphError("order mismatch: not a permutation");
        out.rank[v] = i;
    }
    for (VertexId v = 0; v < n; ++v)
        for (VertexId w : dag.succs(v))
            if (out.rank[v] >= out.rank[w]) throw GraphError("order mismatch: edge against the order");
    out.order = std::move(order);
    return out;
}

BoundaryProfile boundary_profile(const Dag& dag, const TopoOrder& order) {
    std::uint32_t n = dag.vertex_count();
    if (order.order.size() != n || order.rank.size() != n)
        throw GraphError("order mismatch: wrong length");
    {
        std::vector<bool> seen(n, false);
        for (VertexId v : order.order) {
            if (v >= n || seen[v]) throw GraphError("order mismatch: not a permutation");
            seen[v] = true;
        }
    }
    BoundaryProfile out;
    out.values.assign(n, 0);
    std::vector<std::uint32_t> counter(n, 0);
    std::uint32_t boundary = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        VertexId v = order.order[i];
        auto succ = dag.succs(v);
        if (!succ.empty()) {
            counter[v] = static_cast<std::uint32_t>(succ.size());
            ++boundary;
        }
        for (VertexId p : dag.preds(v)) {
            if (order.rank[p] >= i) throw GraphError("order mismatch: edge against the order");
            if (counter[p] > 0 && --counter[p] == 0) --boundary;
        }
        out.values[i] = boundary;
        if (boundary > out.max_value) {
            out.max_value = boundary;
            out.argmax = i + 1;
        }
    }
    return out;
}

SegmentScanner::SegmentScanner(const Dag& dag)
    : dag_(dag),
      pos_(dag.vertex_count(), 0),
      stamp_(dag.vertex_count(), 0),
      counter_(dag.vertex_count(), 0) {}

SegmentScan SegmentScanner::scan(std::span<const VertexId> segment) {
    ++epoch_;
    for (std::uint32_t i = 0; i < segment.size(); ++i) {
        pos_[segment[i]] = i;
        stamp_[segment[i]] = epoch_;
    }
    SegmentScan out;
    std::uint32_t boundary = 0;
    for (std::uint32_t i = 0; i < segment.size(); ++i) {
        VertexId v = segment[i];
        std::uint32_t inside = 0;
        for (VertexId w : dag_.succs(v))
            if (stamp_[w] == epoch_ && pos_[w] > i) ++inside;
        out.edge_count += inside;
        counter_[v] = inside;
        if (inside > 0) ++boundary;
        for (VertexId p : dag_.preds(v)) {
            if (stamp_[p] != epoch_ || pos_[p] >= i) continue;
            if (counter_[p] > 0 && --counter_[p] == 0) --boundary;
        }
        if (boundary > out.max_boundary) {
            out.max_boundary = boundary;
            out.argmax = i + 1;
        }
    }
    return out;
}

std::uint32_t topological_depth(const Dag& dag) {
    TopoOrder order = topological_sort(dag);
    std::vector<std::uint32_t> depth(dag.vertex_count(), 0);
    std::uint32_t best = 0;
    for (VertexId v : order.order) {
        for (VertexId p : dag.preds(v)) depth[v] = std::max(depth[v], depth[p] + 1);
        best = std::max(best, depth[v]);
    }
    return best;
}

Subdag induced_subdag(const Dag& dag, std::span<const VertexId> subset) {
    std::vector<VertexId> members(subset.begin(), subset.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (VertexId v : members)
        if (v >= dag.vertex_count()) throw GraphError("unknown vertex in subset: " + std::to_string(v));
    if (members.empty()) throw GraphError("empty subset");
    std::vector<std::uint32_t> local(dag.vertex_count(), UINT32_MAX);
    for (std::uint32_t i = 0; i < members.size(); ++i) local[members[i]] = i;
    std::vector<Edge> edges;
    for (std::uint32_t i = 0; i < members.size(); ++i)
        for (VertexId w : dag.succs(members[i]))
            if (local[w] != UINT32_MAX) edges.emplace_back(i, local[w]);
    Subdag out{Dag::from_edges(static_cast<std::uint32_t>(members.size()), edges), std::move(members)};
    return out;
}

std::vector<std::vector<VertexId>> weak_components(const Dag& dag) {
    std::uint32_t n = dag.vertex_count();
    std::vector<std::uint32_t> comp(n, UINT32_MAX);
    std::vector<std::vector<VertexId>> out;
    for (VertexId s = 0; s < n; ++s) {
        if (comp[s] != UINT32_MAX) continue;
        std::uint32_t id = static_cast<std::uint32_t>(out.size());
        out.emplace_back();
        std::vector<VertexId> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            out[id].push_back(v);
            for (VertexId w : dag.succs(v))
                if (comp[w] == UINT32_MAX) comp[w] = id, stack.push_back(w);
            for (VertexId w : dag.preds(v))
                if (comp[w] == UINT32_MAX) comp[w] = id, stack.push_back(w);
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

}  // namespace pebble
