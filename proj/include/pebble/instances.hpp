#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pebble/dag.hpp"

namespace pebble {

// splitmix64: the instance generators draw every random value from this
// stream so instances are bit-reproducible across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // Uniform in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
};

struct NamedDag {
    Dag dag;
    std::vector<std::string> names;  // dense id -> external name
};

enum class Family {
    Chain,
    Pyramid,
    Grid,
    BinaryInTree,
    Butterfly,
    LayeredRandom,
    HeavyTailRandom,
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);

struct InstanceSpec {
    Family family = Family::Chain;
    std::uint32_t n = 0;          // chain, binary-in-tree (vertex count), heavy-tail
    std::uint32_t height = 0;     // pyramid
    std::uint32_t rows = 0;       // grid
    std::uint32_t cols = 0;       // grid
    std::uint32_t layers = 0;     // layered-random, butterfly (log size)
    std::uint32_t width = 0;      // layered-random
    std::uint32_t degree = 0;     // layered-random max in-degree
    double hub_fraction = 0.0;    // heavy-tail
    double avg_degree = 0.0;      // heavy-tail target average in-degree
    std::uint64_t seed = 0;

    std::string label() const;
};

// Deterministic per spec+seed. Throws PreconditionError on out-of-range
// parameters.
NamedDag generate(const InstanceSpec& spec);

// Uniform-ish random DAG for tests: each vertex draws an in-degree up to
// max_in_degree from earlier vertices. Always connected enough for exercising
// schedules, never cyclic by construction.
Dag random_dag(std::uint32_t n, std::uint32_t max_in_degree, SplitMix64& rng);

}  // namespace pebble
