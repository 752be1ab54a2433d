#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pebble {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown at ingestion when the edge set has a directed cycle. Carries one
// witness cycle as vertex ids (closed: front == back).
struct CycleError : GraphError {
    CycleError(std::string msg, std::vector<std::uint32_t> witness)
        : GraphError(std::move(msg)), cycle(std::move(witness)) {}
    std::vector<std::uint32_t> cycle;
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeparatorContractError : std::runtime_error {
    SeparatorContractError(std::string msg, int at_level)
        : std::runtime_error(std::move(msg)), level(at_level) {}
    int level;
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t at_line, const std::string& reason)
        : std::runtime_error("line " + std::to_string(at_line) + ": " + reason), line(at_line) {}
    std::size_t line;
};

}  // namespace pebble
