#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pebble/dag.hpp"

namespace pebble {

enum class MoveKind : std::uint8_t { Place, Slide, Remove };

struct Move {
    MoveKind kind;
    VertexId from;  // slide source; unused otherwise
    VertexId to;    // target vertex

    static Move place(VertexId v) { return {MoveKind::Place, 0, v}; }
    static Move slide(VertexId u, VertexId v) { return {MoveKind::Slide, u, v}; }
    static Move remove(VertexId v) { return {MoveKind::Remove, 0, v}; }

    bool operator==(const Move& o) const {
        return kind == o.kind && to == o.to && (kind != MoveKind::Slide || from == o.from);
    }
};

// Push-style consumer. Generators feed moves one at a time so that
// exponentially long schedules never have to be materialized.
struct MoveSink {
    virtual void push(const Move& m) = 0;

protected:
    ~MoveSink() = default;
};

// A schedule is a restartable producer of moves: emitting twice yields the
// same sequence. Materialized schedules are just a special case.
class Schedule {
public:
    struct Gen {
        virtual ~Gen() = default;
        virtual void emit(MoveSink& sink) const = 0;
    };

    Schedule();  // empty
    static Schedule from_moves(std::vector<Move> moves);
    static Schedule from_generator(std::shared_ptr<const Gen> gen);
    static Schedule concat(Schedule a, Schedule b);

    void emit(MoveSink& sink) const;
    std::uint64_t count() const;

    // Throws std::length_error when the schedule exceeds `cap` moves.
    std::vector<Move> materialize(std::uint64_t cap = UINT64_MAX) const;

    // If this schedule is backed by a vector, a view of it (else nullptr).
    const std::vector<Move>* moves_if_materialized() const;

private:
    explicit Schedule(std::shared_ptr<const Gen> gen) : gen_(std::move(gen)) {}
    std::shared_ptr<const Gen> gen_;
};

enum class IllegalReason : std::uint8_t {
    MissingPredecessor,
    NotAPredecessor,
    NotPebbled,
    AlreadyPebbled,
    UnknownVertex,
};

const char* to_string(IllegalReason r);

struct IllegalMoveError : std::runtime_error {
    IllegalMoveError(std::uint64_t at, IllegalReason why, Move m);
    std::uint64_t index;
    IllegalReason reason;
    Move move;
};

struct PebbleMetrics {
    std::uint32_t peak_pebbles = 0;
    std::uint64_t move_count = 0;
    std::vector<bool> pebbled_at_least_once;
    std::vector<bool> final_config;

    std::uint32_t covered_count = 0;
    std::uint32_t final_count = 0;
    bool full(std::uint32_t n) const { return covered_count == n; }
    bool emptying() const { return final_count == 0; }
};

// Streaming replay of moves against the game rules: O(1) state per vertex,
// O(in-degree) work per move. Usable directly as a sink for lazy schedules.
class Simulator final : public MoveSink {
public:
    explicit Simulator(const Dag& dag);

    void push(const Move& m) override;  // throws IllegalMoveError

    std::uint32_t current_pebbles() const { return current_; }
    std::uint32_t peak() const { return peak_; }
    std::uint64_t moves() const { return index_; }
    bool is_pebbled(VertexId v) const { return pebbled_[v]; }

    PebbleMetrics take_metrics();

private:
    Dag dag_;
    std::vector<bool> pebbled_;
    std::vector<bool> covered_;
    std::uint32_t covered_count_ = 0;
    std::uint32_t current_ = 0;
    std::uint32_t peak_ = 0;
    std::uint64_t index_ = 0;
};

PebbleMetrics simulate(const Dag& dag, const Schedule& schedule);

struct Verdict {
    enum class Kind { LegalAndFull, LegalNotFull, Illegal };
    Kind kind = Kind::LegalAndFull;
    std::uint64_t move_index = 0;       // valid when Illegal
    IllegalReason reason = IllegalReason::MissingPredecessor;

    bool legal_and_full() const { return kind == Kind::LegalAndFull; }
};

Verdict verify_full(const Dag& dag, const Schedule& schedule);

}  // namespace pebble
