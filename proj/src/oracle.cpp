#include "pebble/oracle.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

namespace pebble {

namespace {

using Clock = std::chrono::steady_clock;

// One iterative-deepening level: can the graph be fully pebbled with at most
// `s` pebbles? States are (configuration, covered) bit masks over <= 32
// vertices; a state is pruned when an already-seen state had the same
// configuration and a superset of the covered set.
struct LevelSearch {
    const Dag& dag;
    std::uint32_t s;
    std::uint64_t* states_left;
    Clock::time_point deadline;
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> seen;  // config -> covered sets
    bool exhausted = false;
    bool timed_out = false;

    bool dominated(std::uint32_t config, std::uint32_t covered) {
        auto it = seen.find(config);
        if (it == seen.end()) return false;
        for (std::uint32_t c : it->second)
            if ((c & covered) == covered) return true;
        return false;
    }

    void note(std::uint32_t config, std::uint32_t covered) {
        auto& list = seen[config];
        list.erase(std::remove_if(list.begin(), list.end(),
                                  [&](std::uint32_t c) { return (covered & c) == c; }),
                   list.end());
        list.push_back(covered);
    }

    bool run() {
        std::uint32_t n = dag.vertex_count();
        std::uint32_t all = n == 32 ? 0xffffffffu : ((1u << n) - 1);
        std::vector<std::uint32_t> pred_mask(n, 0);
        for (VertexId v = 0; v < n; ++v)
            for (VertexId p : dag.preds(v)) pred_mask[v] |= 1u << p;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{0u, 0u}};
        note(0, 0);
        while (!stack.empty()) {
            if ((*states_left)-- == 0) {
                exhausted = true;
                return false;
            }
            if ((*states_left & 0xfff) == 0 && Clock::now() > deadline) {
                timed_out = true;
                return false;
            }
            auto [config, covered] = stack.back();
            stack.pop_back();
            if (covered == all) return true;
            auto try_push = [&](std::uint32_t cfg, std::uint32_t cov) {
                if (dominated(cfg, cov)) return;
                note(cfg, cov);
                stack.emplace_back(cfg, cov);
            };
            std::uint32_t count = static_cast<std::uint32_t>(__builtin_popcount(config));
            for (VertexId v = 0; v < n; ++v) {
                std::uint32_t bit = 1u << v;
                if (config & bit) {
                    try_push(config & ~bit, covered);  // remove
                    continue;
                }
                if ((config & pred_mask[v]) != pred_mask[v]) continue;
                if (count < s) try_push(config | bit, covered | bit);  // place
                std::uint32_t sliders = config & pred_mask[v];
                while (sliders) {
                    std::uint32_t u = sliders & (~sliders + 1);
                    sliders &= sliders - 1;
                    try_push((config & ~u) | bit, covered | bit);  // slide
                }
            }
        }
        return false;
    }
};

}  // namespace

OptimalResult optimal_pebbles(const Dag& dag, const SearchBudget& budget) {
    std::uint32_t n = dag.vertex_count();
    if (n > 32) return {false, 0, "graph too large for exact search"};
    std::uint32_t cap = budget.max_pebbles == 0 ? n : std::min(budget.max_pebbles, n);
    std::uint64_t states = budget.max_states;
    auto deadline = Clock::now() + budget.timeout;
    for (std::uint32_t s = 1; s <= cap; ++s) {
        LevelSearch search{dag, s, &states, deadline, {}, false, false};
        if (search.run()) return {true, s, {}};
        if (search.exhausted) return {false, 0, "state cap exceeded"};
        if (search.timed_out) return {false, 0, "timeout"};
    }
    return {false, 0, "pebble cap exceeded"};
}

namespace {

// Packs weak components (by size) into two sides so that 3*max <= 2n; returns
// nullopt when impossible. Components are assigned greedily into the smaller
// side after sorting by descending size, which is exact enough here because
// callers retry with bigger separators anyway.
std::optional<std::pair<std::vector<VertexId>, std::vector<VertexId>>> pack_components(
    const std::vector<std::vector<VertexId>>& comps, std::uint64_t n) {
    std::vector<std::size_t> idx(comps.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return comps[a].size() > comps[b].size(); });
    std::vector<VertexId> left, right;
    for (std::size_t i : idx) {
        auto& side = left.size() <= right.size() ? left : right;
        side.insert(side.end(), comps[i].begin(), comps[i].end());
    }
    std::uint64_t mx = std::max(left.size(), right.size());
    if (3 * mx > 2 * n) return std::nullopt;
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    return std::make_pair(std::move(left), std::move(right));
}

// Exact balanced packing by subset-sum over component sizes; preferred for
// the brute-force oracle, with lexicographically earliest assignment.
std::optional<std::pair<std::vector<VertexId>, std::vector<VertexId>>> pack_components_exact(
    const std::vector<std::vector<VertexId>>& comps, std::uint64_t n) {
    std::size_t k = comps.size();
    std::uint64_t total = 0;
    for (const auto& c : comps) total += c.size();
    // reachable[i][s]: can components i.. fill `s` vertices into the left side
    std::vector<std::vector<char>> reachable(k + 1, std::vector<char>(total + 1, 0));
    reachable[k][0] = 1;
    for (std::size_t i = k; i-- > 0;) {
        for (std::uint64_t s = 0; s <= total; ++s) {
            if (reachable[i + 1][s]) reachable[i][s] = 1;
            std::uint64_t sz = comps[i].size();
            if (s >= sz && reachable[i + 1][s - sz]) reachable[i][s] = 1;
        }
    }
    auto balanced = [&](std::uint64_t left_size) {
        std::uint64_t mx = std::max(left_size, total - left_size);
        return 3 * mx <= 2 * n;
    };
    std::optional<std::uint64_t> chosen;
    for (std::uint64_t s = 0; s <= total; ++s)
        if (reachable[0][s] && balanced(s)) {
            chosen = s;
            break;
        }
    if (!chosen) return std::nullopt;
    std::vector<VertexId> left, right;
    std::uint64_t need = *chosen;
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t sz = comps[i].size();
        // prefer assigning earlier components to the left side
        if (need >= sz && reachable[i + 1][need - sz]) {
            left.insert(left.end(), comps[i].begin(), comps[i].end());
            need -= sz;
        } else {
            right.insert(right.end(), comps[i].begin(), comps[i].end());
        }
    }
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    return std::make_pair(std::move(left), std::move(right));
}

}  // namespace

namespace {

// Contract self-check on every result handed out by the two oracles.
SeparatorResult checked(const Dag& dag, SeparatorResult result) {
    check_separator_contract(dag, result, 0);
    return result;
}

}  // namespace

SeparatorResult brute_force_separator(const Dag& dag) {
    std::uint32_t n = dag.vertex_count();
    if (n > 24) throw PreconditionError("brute_force_separator: graph too large");
    // Enumerate candidate separators by popcount, then numeric order.
    for (std::uint32_t size = 0; size <= n; ++size) {
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            if (static_cast<std::uint32_t>(__builtin_popcountll(mask)) != size) continue;
            std::vector<VertexId> rest;
            for (VertexId v = 0; v < n; ++v)
                if (!(mask >> v & 1)) rest.push_back(v);
            if (rest.empty()) {
                std::vector<VertexId> sep(n);
                for (VertexId v = 0; v < n; ++v) sep[v] = v;
                return checked(dag, {{}, sep, {}});
            }
            Subdag sub = induced_subdag(dag, rest);
            auto comps = weak_components(sub.graph);
            for (auto& comp : comps)
                for (auto& v : comp) v = sub.to_parent[v];
            auto packed = pack_components_exact(comps, n);
            if (!packed) continue;
            std::vector<VertexId> sep;
            for (VertexId v = 0; v < n; ++v)
                if (mask >> v & 1) sep.push_back(v);
            return checked(dag, {std::move(packed->first), std::move(sep), std::move(packed->second)});
        }
    }
    std::vector<VertexId> sep(n);
    for (VertexId v = 0; v < n; ++v) sep[v] = v;
    return checked(dag, {{}, sep, {}});
}

SeparatorResult heuristic_separator(const Dag& dag) {
    std::uint32_t n = dag.vertex_count();
    // Component packing alone first.
    auto comps = weak_components(dag);
    if (comps.size() > 1) {
        if (auto packed = pack_components(comps, n))
            return checked(dag, {std::move(packed->first), {}, std::move(packed->second)});
    }
    // Longest-path level cut: remove one level plus every vertex with an edge
    // jumping across it.
    TopoOrder order = topological_sort(dag);
    std::vector<std::uint32_t> level(n, 0);
    std::uint32_t max_level = 0;
    for (VertexId v : order.order) {
        for (VertexId p : dag.preds(v)) level[v] = std::max(level[v], level[p] + 1);
        max_level = std::max(max_level, level[v]);
    }
    SeparatorResult best;
    bool found = false;
    std::size_t best_size = n + 1;
    for (std::uint32_t k = 0; k <= max_level; ++k) {
        std::vector<VertexId> sep, left, right;
        std::vector<char> in_sep(n, 0);
        for (VertexId v = 0; v < n; ++v) {
            if (level[v] == k) {
                in_sep[v] = 1;
                continue;
            }
            if (level[v] < k)
                for (VertexId w : dag.succs(v))
                    if (level[w] > k) {
                        in_sep[v] = 1;
                        break;
                    }
        }
        for (VertexId v = 0; v < n; ++v) {
            if (in_sep[v])
                sep.push_back(v);
            else if (level[v] < k)
                left.push_back(v);
            else
                right.push_back(v);
        }
        std::uint64_t mx = std::max(left.size(), right.size());
        if (3 * mx > 2ull * n) continue;
        if (sep.size() < best_size) {
            best_size = sep.size();
            best = {std::move(left), std::move(sep), std::move(right)};
            found = true;
        }
    }
    if (found) return checked(dag, std::move(best));
    // Always-valid fallback.
    std::vector<VertexId> sep(n);
    for (VertexId v = 0; v < n; ++v) sep[v] = v;
    return checked(dag, {{}, sep, {}});
}

void enumerate_small_dags(std::uint32_t n, const std::function<void(const Dag&)>& fn) {
    if (n == 0 || n > 6) throw PreconditionError("enumerate_small_dags supports 1 <= n <= 6");
    std::uint32_t slots = n * (n - 1) / 2;
    std::vector<Edge> pairs;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    for (std::uint64_t mask = 0; mask < (1ull << slots); ++mask) {
        std::vector<Edge> edges;
        for (std::uint32_t b = 0; b < slots; ++b)
            if (mask >> b & 1) edges.push_back(pairs[b]);
        fn(Dag::from_edges(n, edges));
    }
}

}  // namespace pebble
