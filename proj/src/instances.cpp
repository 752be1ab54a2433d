#include "pebble/instances.hpp"

#include <algorithm>
#include <cmath>

#include "pebble/errors.hpp"

namespace pebble {

const char* family_name(Family f) {
    switch (f) {
        case Family::Chain: return "chain";
        case Family::Pyramid: return "pyramid";
        case Family::Grid: return "grid";
        case Family::BinaryInTree: return "binary-in-tree";
        case Family::Butterfly: return "butterfly";
        case Family::LayeredRandom: return "layered-random";
        case Family::HeavyTailRandom: return "heavy-tail-random";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    for (Family f : {Family::Chain, Family::Pyramid, Family::Grid, Family::BinaryInTree,
                     Family::Butterfly, Family::LayeredRandom, Family::HeavyTailRandom})
        if (name == family_name(f)) return f;
    throw PreconditionError("unknown family: " + name);
}

std::string InstanceSpec::label() const {
    std::string out = family_name(family);
    switch (family) {
        case Family::Chain:
        case Family::BinaryInTree: out += "-n" + std::to_string(n); break;
        case Family::Pyramid: out += "-h" + std::to_string(height); break;
        case Family::Grid: out += "-" + std::to_string(rows) + "x" + std::to_string(cols); break;
        case Family::Butterfly: out += "-k" + std::to_string(layers); break;
        case Family::LayeredRandom:
            out += "-l" + std::to_string(layers) + "w" + std::to_string(width) + "d" +
                   std::to_string(degree) + "s" + std::to_string(seed);
            break;
        case Family::HeavyTailRandom:
            out += "-n" + std::to_string(n) + "s" + std::to_string(seed);
            break;
    }
    return out;
}

namespace {

NamedDag with_default_names(Dag dag) {
    std::vector<std::string> names(dag.vertex_count());
    for (VertexId v = 0; v < dag.vertex_count(); ++v) names[v] = "v" + std::to_string(v);
    return {std::move(dag), std::move(names)};
}

Dag make_chain(std::uint32_t n) {
    if (n == 0) throw PreconditionError("chain needs n >= 1");
    std::vector<Edge> edges;
    for (VertexId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return Dag::from_edges(n, edges);
}

// Rows of 1, 2, ..., height+1 vertices; each vertex is computed from the two
// below it, so sources are the bottom row and the apex is the unique sink.
Dag make_pyramid(std::uint32_t height) {
    std::uint32_t rows = height + 1;
    std::vector<std::vector<VertexId>> row_ids(rows);
    std::uint32_t id = 0;
    for (std::uint32_t r = 0; r < rows; ++r) {
        row_ids[r].resize(r + 1);
        for (auto& x : row_ids[r]) x = id++;
    }
    std::vector<Edge> edges;
    for (std::uint32_t r = 0; r + 1 < rows; ++r)
        for (std::uint32_t i = 0; i <= r; ++i) {
            edges.emplace_back(row_ids[r + 1][i], row_ids[r][i]);
            edges.emplace_back(row_ids[r + 1][i + 1], row_ids[r][i]);
        }
    return Dag::from_edges(id, edges);
}

Dag make_grid(std::uint32_t rows, std::uint32_t cols) {
    if (rows == 0 || cols == 0) throw PreconditionError("grid needs rows, cols >= 1");
    auto at = [&](std::uint32_t r, std::uint32_t c) { return r * cols + c; };
    std::vector<Edge> edges;
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(at(r, c), at(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(at(r, c), at(r + 1, c));
        }
    return Dag::from_edges(rows * cols, edges);
}

// Complete binary in-tree: leaves feed upward into a single root sink.
Dag make_binary_in_tree(std::uint32_t n) {
    if (n == 0 || (n & (n + 1)) != 0)
        throw PreconditionError("binary-in-tree needs n = 2^k - 1");
    std::vector<Edge> edges;
    // heap layout: node i has children 2i+1, 2i+2; edges child -> parent
    for (VertexId v = 1; v < n; ++v) edges.emplace_back(v, (v - 1) / 2);
    return Dag::from_edges(n, edges);
}

Dag make_butterfly(std::uint32_t k) {
    if (k == 0 || k > 10) throw PreconditionError("butterfly needs 1 <= k <= 10");
    std::uint32_t w = 1u << k;
    auto at = [&](std::uint32_t layer, std::uint32_t i) { return layer * w + i; };
    std::vector<Edge> edges;
    for (std::uint32_t layer = 0; layer < k; ++layer)
        for (std::uint32_t i = 0; i < w; ++i) {
            edges.emplace_back(at(layer, i), at(layer + 1, i));
            edges.emplace_back(at(layer, i ^ (1u << layer)), at(layer + 1, i));
        }
    return Dag::from_edges((k + 1) * w, edges);
}

Dag make_layered_random(std::uint32_t layers, std::uint32_t width, std::uint32_t degree,
                        std::uint64_t seed) {
    if (layers == 0 || width == 0) throw PreconditionError("layered-random needs layers, width >= 1");
    SplitMix64 rng(seed);
    std::vector<Edge> edges;
    auto at = [&](std::uint32_t layer, std::uint32_t i) { return layer * width + i; };
    for (std::uint32_t layer = 1; layer < layers; ++layer)
        for (std::uint32_t i = 0; i < width; ++i) {
            std::uint32_t deg = std::min<std::uint32_t>(degree, width);
            std::uint32_t want = deg == 0 ? 0 : 1 + static_cast<std::uint32_t>(rng.below(deg));
            std::vector<VertexId> picks;
            while (picks.size() < want) {
                VertexId p = at(layer - 1, static_cast<std::uint32_t>(rng.below(width)));
                if (std::find(picks.begin(), picks.end(), p) == picks.end()) picks.push_back(p);
            }
            for (VertexId p : picks) edges.emplace_back(p, at(layer, i));
        }
    return Dag::from_edges(layers * width, edges);
}

// Mostly low in-degree with a configurable fraction of hubs whose in-degree
// exceeds log2 m; the average stays near the target.
Dag make_heavy_tail(std::uint32_t n, double hub_fraction, double avg_degree, std::uint64_t seed) {
    if (n < 2) throw PreconditionError("heavy-tail-random needs n >= 2");
    if (hub_fraction < 0.0 || hub_fraction > 0.5)
        throw PreconditionError("hub_fraction must be in [0, 0.5]");
    if (avg_degree <= 0.0) avg_degree = 2.0;
    SplitMix64 rng(seed);
    double m_estimate = avg_degree * n;
    auto log2m = std::max(1.0, std::log2(std::max(2.0, m_estimate)));
    std::uint32_t hub_degree = static_cast<std::uint32_t>(std::ceil(2.0 * log2m));
    std::uint32_t hubs = static_cast<std::uint32_t>(std::ceil(hub_fraction * n));
    std::vector<Edge> edges;
    // Hubs are drawn from the later half so they have enough candidates.
    std::vector<char> is_hub(n, 0);
    std::uint32_t placed = 0;
    while (placed < hubs) {
        auto v = static_cast<VertexId>(n / 2 + rng.below(n - n / 2));
        if (v == 0 || is_hub[v]) continue;
        is_hub[v] = 1;
        ++placed;
    }
    for (VertexId v = 1; v < n; ++v) {
        std::uint32_t want;
        if (is_hub[v]) {
            want = std::min<std::uint32_t>(hub_degree, v);
        } else {
            auto base = static_cast<std::uint32_t>(std::max(1.0, std::floor(avg_degree)));
            want = 1 + static_cast<std::uint32_t>(rng.below(std::max<std::uint32_t>(1, base)));
            want = std::min(want, v);
        }
        std::vector<VertexId> picks;
        while (picks.size() < want) {
            auto p = static_cast<VertexId>(rng.below(v));
            if (std::find(picks.begin(), picks.end(), p) == picks.end()) picks.push_back(p);
        }
        for (VertexId p : picks) edges.emplace_back(p, v);
    }
    return Dag::from_edges(n, edges);
}

}  // namespace

NamedDag generate(const InstanceSpec& spec) {
    switch (spec.family) {
        case Family::Chain: return with_default_names(make_chain(spec.n));
        case Family::Pyramid: return with_default_names(make_pyramid(spec.height));
        case Family::Grid: return with_default_names(make_grid(spec.rows, spec.cols));
        case Family::BinaryInTree: return with_default_names(make_binary_in_tree(spec.n));
        case Family::Butterfly: return with_default_names(make_butterfly(spec.layers));
        case Family::LayeredRandom:
            return with_default_names(make_layered_random(spec.layers, spec.width, spec.degree, spec.seed));
        case Family::HeavyTailRandom:
            return with_default_names(make_heavy_tail(spec.n, spec.hub_fraction, spec.avg_degree, spec.seed));
    }
    throw PreconditionError("unknown family");
}

Dag random_dag(std::uint32_t n, std::uint32_t max_in_degree, SplitMix64& rng) {
    std::vector<Edge> edges;
    for (VertexId v = 1; v < n; ++v) {
        std::uint32_t cap = std::min(max_in_degree, v);
        std::uint32_t want = cap == 0 ? 0 : static_cast<std::uint32_t>(rng.below(cap + 1));
        std::vector<VertexId> picks;
        while (picks.size() < want) {
            auto p = static_cast<VertexId>(rng.below(v));
            if (std::find(picks.begin(), picks.end(), p) == picks.end()) picks.push_back(p);
        }
        for (VertexId p : picks) edges.emplace_back(p, v);
    }
    return Dag::from_edges(std::max<std::uint32_t>(n, 1), edges);
}

}  // namespace pebble
