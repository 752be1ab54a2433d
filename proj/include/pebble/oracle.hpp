#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>

#include "pebble/dag.hpp"
#include "pebble/schedulers.hpp"

namespace pebble {

struct SearchBudget {
    std::uint32_t max_pebbles = 0;  // 0 = vertex count
    std::uint64_t max_states = 50'000'000;
    std::chrono::milliseconds timeout{60'000};
};

struct OptimalResult {
    bool known = false;
    std::uint32_t pebbles = 0;      // valid when known
    std::string limit;              // which budget was exhausted otherwise
};

// Exact pebbling number by iterative deepening on the pebble budget: for each
// S, explores the (configuration, covered-set) graph under the game rules
// (slides included) with dominance pruning. Intended for small graphs.
OptimalResult optimal_pebbles(const Dag& dag, const SearchBudget& budget = {});

// Exhaustive minimum separator: enumerates candidate separator sets by
// increasing size and packs the remaining weak components into two balanced
// sides. Always succeeds (V_S = V is valid). Intended for n <= ~16.
SeparatorResult brute_force_separator(const Dag& dag);

// Level-cut heuristic with component packing; satisfies the contract, no size
// guarantee.
SeparatorResult heuristic_separator(const Dag& dag);

// All labeled DAGs on n vertices whose edges respect the id order
// (upper-triangular adjacency): 2^(n(n-1)/2) graphs.
void enumerate_small_dags(std::uint32_t n, const std::function<void(const Dag&)>& fn);

}  // namespace pebble
