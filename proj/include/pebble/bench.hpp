#pragma once

#include <string>
#include <vector>

#include "pebble/instances.hpp"
#include "pebble/schedulers.hpp"

namespace pebble {

struct BenchRow {
    std::string strategy;
    std::string instance;
    std::uint32_t n = 0;
    std::uint64_t m = 0;
    std::uint32_t d = 0;
    bool ok = false;
    std::string skip_reason;
    std::uint64_t space_bound = 0;
    std::uint32_t peak = 0;
    std::string time_bound;
    std::uint64_t moves = 0;
    double millis = 0.0;
    double bound_general = 0.0;  // m/log2 m + d
    double bound_loui = 0.0;     // 3 d n / log2 n + 4
};

// Runs every (strategy, instance) pair, simulating each schedule; strategy
// errors mark the row skipped instead of aborting the table. Known strategy
// names: topo, pipeline:<budget>, theorem1, lemma7, general, depth-classic,
// theorem4, separator.
std::vector<BenchRow> run_bench(const std::vector<std::string>& strategies,
                                const std::vector<InstanceSpec>& instances);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace pebble
