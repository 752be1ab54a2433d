#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "pebble/errors.hpp"

namespace pebble {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

// Immutable DAG over dense vertex ids 0..n-1. Acyclicity, absence of
// self-loops and of duplicate edges are enforced at construction. Cheap to
// copy: instances share one immutable payload, so schedule generators can
// capture the graph by value.
class Dag {
public:
    static Dag from_edges(std::uint32_t vertex_count, std::span<const Edge> edges);
    static Dag from_edges(std::uint32_t vertex_count, const std::vector<Edge>& edges) {
        return from_edges(vertex_count, std::span<const Edge>(edges));
    }

    std::uint32_t vertex_count() const { return d_->n; }
    std::uint64_t edge_count() const { return d_->m; }
    std::uint32_t max_in_degree() const { return d_->max_in; }
    double avg_in_degree() const {
        return d_->n == 0 ? 0.0 : static_cast<double>(d_->m) / static_cast<double>(d_->n);
    }

    std::uint32_t in_degree(VertexId v) const { return static_cast<std::uint32_t>(preds(v).size()); }
    std::span<const VertexId> succs(VertexId v) const {
        check(v);
        return d_->succ[v];
    }
    std::span<const VertexId> preds(VertexId v) const {
        check(v);
        return d_->pred[v];
    }

    std::vector<Edge> edges() const;

    bool same_data(const Dag& other) const { return d_ == other.d_; }

private:
    struct Data {
        std::uint32_t n = 0;
        std::uint64_t m = 0;
        std::uint32_t max_in = 0;
        std::vector<std::vector<VertexId>> succ;
        std::vector<std::vector<VertexId>> pred;
    };
    explicit Dag(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    void check(VertexId v) const {
        if (v >= d_->n) throw GraphError("vertex id out of range: " + std::to_string(v));
    }
    std::shared_ptr<const Data> d_;
};

// A topological order together with its inverse (vertex -> position).
struct TopoOrder {
    std::vector<VertexId> order;
    std::vector<std::uint32_t> rank;

    std::uint32_t position(VertexId v) const { return rank[v]; }
};

// Kahn's algorithm with a min-vertex-id tie-break among ready vertices, so
// every downstream artifact is deterministic for a fixed input.
TopoOrder topological_sort(const Dag& dag);

// Validates that `order` is a topological order of `dag` and builds the rank
// index. Throws GraphError("order mismatch ...") otherwise.
TopoOrder topo_order_from(const Dag& dag, std::vector<VertexId> order);

// values[i-1] = number of vertices among the first i of the order that still
// have a successor in the suffix; max_value = b(G, phi); argmax = lowest
// 1-based index attaining the max (1 when the profile is all zero).
struct BoundaryProfile {
    std::vector<std::uint32_t> values;
    std::uint32_t max_value = 0;
    std::uint32_t argmax = 1;
};

// Successor-counter scan, O(n + m).
BoundaryProfile boundary_profile(const Dag& dag, const TopoOrder& order);

// Result of scanning one contiguous (or arbitrary) vertex sequence restricted
// to its induced edges. argmax is 1-based within the segment.
struct SegmentScan {
    std::uint32_t max_boundary = 0;
    std::uint32_t argmax = 1;
    std::uint64_t edge_count = 0;
};

// Scratch-reusing scanner for induced segments of a fixed graph.
class SegmentScanner {
public:
    explicit SegmentScanner(const Dag& dag);
    // Boundary scan of dag restricted to `segment` (which must be a
    // topologically consistent sequence of distinct vertices).
    SegmentScan scan(std::span<const VertexId> segment);

private:
    Dag dag_;
    std::vector<std::uint32_t> pos_;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint32_t> counter_;
    std::uint32_t epoch_ = 0;
};

// Longest directed path, in edges.
std::uint32_t topological_depth(const Dag& dag);

// Induced sub-DAG with dense local ids; to_parent maps a local id back to the
// parent vertex (ascending, so local order mirrors parent id order).
struct Subdag {
    Dag graph;
    std::vector<VertexId> to_parent;
};

Subdag induced_subdag(const Dag& dag, std::span<const VertexId> subset);

// Weakly connected components, each sorted ascending; components ordered by
// smallest member.
std::vector<std::vector<VertexId>> weak_components(const Dag& dag);

}  // namespace pebble
