#include "pebble/schedule.hpp"

#include <algorithm>

namespace pebble {

namespace {

struct EmptyGen final : Schedule::Gen {
    void emit(MoveSink&) const override {}
};

struct VectorGen final : Schedule::Gen {
    explicit VectorGen(std::vector<Move> m) : moves(std::move(m)) {}
    void emit(MoveSink& sink) const override {
        for (const Move& m : moves) sink.push(m);
    }
    std::vector<Move> moves;
};

struct ConcatGen final : Schedule::Gen {
    ConcatGen(Schedule a_, Schedule b_) : a(std::move(a_)), b(std::move(b_)) {}
    void emit(MoveSink& sink) const override {
        a.emit(sink);
        b.emit(sink);
    }
    Schedule a, b;
};

struct CountSink final : MoveSink {
    std::uint64_t n = 0;
    void push(const Move&) override { ++n; }
};

struct CollectSink final : MoveSink {
    explicit CollectSink(std::uint64_t cap_) : cap(cap_) {}
    void push(const Move& m) override {
        if (out.size() >= cap) throw std::length_error("schedule exceeds materialization cap");
        out.push_back(m);
    }
    std::uint64_t cap;
    std::vector<Move> out;
};

}  // namespace

Schedule::Schedule() : gen_(std::make_shared<EmptyGen>()) {}

Schedule Schedule::from_moves(std::vector<Move> moves) {
    return Schedule(std::make_shared<VectorGen>(std::move(moves)));
}

Schedule Schedule::from_generator(std::shared_ptr<const Gen> gen) { return Schedule(std::move(gen)); }

Schedule Schedule::concat(Schedule a, Schedule b) {
    return Schedule(std::make_shared<ConcatGen>(std::move(a), std::move(b)));
}

void Schedule::emit(MoveSink& sink) const { gen_->emit(sink); }

std::uint64_t Schedule::count() const {
    if (const auto* v = moves_if_materialized()) return v->size();
    CountSink s;
    emit(s);
    return s.n;
}

std::vector<Move> Schedule::materialize(std::uint64_t cap) const {
    CollectSink s(cap);
    emit(s);
    return std::move(s.out);
}

const std::vector<Move>* Schedule::moves_if_materialized() const {
    if (const auto* v = dynamic_cast<const VectorGen*>(gen_.get())) return &v->moves;
    return nullptr;
}

const char* to_string(IllegalReason r) {
    switch (r) {
        case IllegalReason::MissingPredecessor: return "missing-predecessor";
        case IllegalReason::NotAPredecessor: return "not-a-predecessor";
        case IllegalReason::NotPebbled: return "not-pebbled";
        case IllegalReason::AlreadyPebbled: return "already-pebbled";
        case IllegalReason::UnknownVertex: return "unknown-vertex";
    }
    return "?";
}

IllegalMoveError::IllegalMoveError(std::uint64_t at, IllegalReason why, Move m)
    : std::runtime_error("illegal move at index " + std::to_string(at) + ": " + to_string(why)),
      index(at),
      reason(why),
      move(m) {}

Simulator::Simulator(const Dag& dag)
    : dag_(dag), pebbled_(dag.vertex_count(), false), covered_(dag.vertex_count(), false) {}

void Simulator::push(const Move& m) {
    std::uint32_t n = dag_.vertex_count();
    auto fail = [&](IllegalReason r) { throw IllegalMoveError(index_, r, m); };
    if (m.to >= n || (m.kind == MoveKind::Slide && m.from >= n)) fail(IllegalReason::UnknownVertex);
    switch (m.kind) {
        case MoveKind::Place: {
            if (pebbled_[m.to]) fail(IllegalReason::AlreadyPebbled);
            for (VertexId p : dag_.preds(m.to))
                if (!pebbled_[p]) fail(IllegalReason::MissingPredecessor);
            pebbled_[m.to] = true;
            ++current_;
            break;
        }
        case MoveKind::Slide: {
            if (pebbled_[m.to]) fail(IllegalReason::AlreadyPebbled);
            auto preds = dag_.preds(m.to);
            if (!std::binary_search(preds.begin(), preds.end(), m.from)) fail(IllegalReason::NotAPredecessor);
            if (!pebbled_[m.from]) fail(IllegalReason::NotPebbled);
            for (VertexId p : preds)
                if (!pebbled_[p]) fail(IllegalReason::MissingPredecessor);
            pebbled_[m.from] = false;
            pebbled_[m.to] = true;
            break;
        }
        case MoveKind::Remove: {
            if (!pebbled_[m.to]) fail(IllegalReason::NotPebbled);
            pebbled_[m.to] = false;
            --current_;
            break;
        }
    }
    if (m.kind != MoveKind::Remove && !covered_[m.to]) {
        covered_[m.to] = true;
        ++covered_count_;
    }
    peak_ = std::max(peak_, current_);
    ++index_;
}

PebbleMetrics Simulator::take_metrics() {
    PebbleMetrics out;
    out.peak_pebbles = peak_;
    out.move_count = index_;
    out.covered_count = covered_count_;
    out.final_count = current_;
    out.pebbled_at_least_once = std::move(covered_);
    out.final_config = std::move(pebbled_);
    return out;
}

PebbleMetrics simulate(const Dag& dag, const Schedule& schedule) {
    Simulator sim(dag);
    schedule.emit(sim);
    return sim.take_metrics();
}

Verdict verify_full(const Dag& dag, const Schedule& schedule) {
    Verdict out;
    try {
        PebbleMetrics m = simulate(dag, schedule);
        out.kind = m.full(dag.vertex_count()) ? Verdict::Kind::LegalAndFull : Verdict::Kind::LegalNotFull;
    } catch (const IllegalMoveError& e) {
        out.kind = Verdict::Kind::Illegal;
        out.move_index = e.index;
        out.reason = e.reason;
    }
    return out;
}

}  // namespace pebble
