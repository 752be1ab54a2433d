#include "pebble/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pebble {

namespace {

constexpr std::uint64_t kNoIndex = UINT64_MAX;
constexpr VertexId kNoVertex = UINT32_MAX;

// Inner schedules replayed many times by the challenging construction are
// cached as vectors up to this many moves.
constexpr std::uint64_t kMaterializeCap = 1u << 23;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > UINT64_MAX / b) return UINT64_MAX;
    return a * b;
}

// 2^e > v, exact.
bool pow2_gt(std::uint64_t e, std::uint64_t v) {
    if (e >= 64) return true;
    return (std::uint64_t{1} << e) > v;
}

// Smallest c with c*c >= v.
std::uint64_t ceil_sqrt(std::uint64_t v) {
    if (v == 0) return 0;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && (r - 1) * (r - 1) >= v) --r;
    while (r * r < v) ++r;
    return r;
}

// ---------------------------------------------------------------------------
// Lemma-2 topological order strategy.

// Places order[i] and drops every pebble in the window whose within-window
// successors are exhausted. Shared by the plain schedule and the per-part
// base case of the decomposition construction.
void emit_topo_sequence(const Dag& dag, std::span<const VertexId> seq, MoveSink& sink) {
    std::vector<std::uint32_t> local(dag.vertex_count(), kNoVertex);
    for (std::uint32_t i = 0; i < seq.size(); ++i) local[seq[i]] = i;
    std::vector<std::uint32_t> cnt(seq.size(), 0);
    for (std::uint32_t i = 0; i < seq.size(); ++i) {
        std::uint32_t c = 0;
        for (VertexId w : dag.succs(seq[i]))
            if (local[w] != kNoVertex && local[w] > i) ++c;
        cnt[i] = c;
    }
    std::vector<VertexId> removable;
    for (std::uint32_t i = 0; i < seq.size(); ++i) {
        VertexId v = seq[i];
        sink.push(Move::place(v));
        removable.clear();
        if (cnt[i] == 0) removable.push_back(v);
        for (VertexId p : dag.preds(v)) {
            std::uint32_t lp = local[p];
            if (lp != kNoVertex && lp < i && --cnt[lp] == 0) removable.push_back(p);
        }
        std::sort(removable.begin(), removable.end());
        for (VertexId r : removable) sink.push(Move::remove(r));
    }
}

struct TopoGen final : Schedule::Gen {
    TopoGen(Dag d, std::vector<VertexId> o) : dag(std::move(d)), order(std::move(o)) {}
    void emit(MoveSink& sink) const override { emit_topo_sequence(dag, order, sink); }
    Dag dag;
    std::vector<VertexId> order;
};

// ---------------------------------------------------------------------------
// One-pebble walk for graphs with max in-degree <= 1 (forests of out-trees):
// for every root-to-leaf path, place the root, slide down, remove at the leaf.

struct UnitWalkGen final : Schedule::Gen {
    explicit UnitWalkGen(Dag d) : dag(std::move(d)) {}
    void emit(MoveSink& sink) const override {
        std::uint32_t n = dag.vertex_count();
        for (VertexId r = 0; r < n; ++r) {
            if (dag.in_degree(r) != 0) continue;
            if (dag.succs(r).empty()) {
                sink.push(Move::place(r));
                sink.push(Move::remove(r));
                continue;
            }
            std::vector<std::pair<VertexId, std::uint32_t>> stack{{r, 0}};
            std::vector<VertexId> path{r};
            while (!stack.empty()) {
                auto& [v, it] = stack.back();
                auto sc = dag.succs(v);
                if (it == sc.size()) {
                    stack.pop_back();
                    path.pop_back();
                    continue;
                }
                VertexId c = sc[it++];
                stack.emplace_back(c, 0);
                path.push_back(c);
                if (dag.succs(c).empty()) {
                    sink.push(Move::place(path.front()));
                    for (std::size_t i = 0; i + 1 < path.size(); ++i)
                        sink.push(Move::slide(path[i], path[i + 1]));
                    sink.push(Move::remove(path.back()));
                    stack.pop_back();
                    path.pop_back();
                }
            }
        }
    }
    Dag dag;
};

SchedulerReport unit_walk_report(const Dag& dag, std::string strategy) {
    SchedulerReport rep;
    rep.schedule = Schedule::from_generator(std::make_shared<UnitWalkGen>(dag));
    rep.space_bound = 1;
    rep.time_bound = TimeBound::exact(rep.schedule.count());
    rep.strategy = std::move(strategy);
    rep.params = {{"path", "unit-walk"}, {"d", dag.max_in_degree()}};
    return rep;
}

// ---------------------------------------------------------------------------
// Lemma-3 construction.
//
// Each vertex u of the last part with earlier-part predecessors P(u) gets one
// full replay of the inner schedule, transformed so that every member of
// P(u) still carries a pebble when u is pebbled: the final removal of a
// member is suppressed, u is pebbled by sliding from a suppressed member
// when one is available (else placed), the extra pebbles are dropped, and
// the replay then finishes verbatim. `holds` counts vertices that enclosing
// replays keep pebbled; slides never consume a vertex while it is held,
// which keeps the nested transformations one-for-one on moves.

struct GroupPlan {
    std::vector<std::uint64_t> skip_idx;  // sorted stream indices to suppress
    std::vector<VertexId> skip_subst;     // parallel; kNoVertex = plain suppression
    std::uint64_t cut = kNoIndex;         // injection happens after this index
    bool slide_mode = false;
    VertexId slide_from = kNoVertex;
    std::vector<VertexId> restores;       // ascending vertex ids
    bool found = false;
};

struct GroupAnalyzer final : MoveSink {
    GroupAnalyzer(const std::vector<VertexId>& members_, const std::vector<std::uint16_t>& holds_)
        : members(members_), holds(holds_), st(members_.size()) {}

    struct MState {
        bool virt = false;
        bool ever = false;
        std::uint64_t pending = kNoIndex;
        VertexId subst = kNoVertex;
    };

    int find(VertexId v) const {
        auto it = std::lower_bound(members.begin(), members.end(), v);
        if (it == members.end() || *it != v) return -1;
        return static_cast<int>(it - members.begin());
    }

    void push(const Move& m) override {
        if (plan.found) {
            ++idx;
            return;
        }
        if (m.kind == MoveKind::Remove) {
            int i = find(m.to);
            if (i >= 0) {
                st[i].virt = false;
                st[i].pending = idx;
                st[i].subst = kNoVertex;
            }
        } else {
            if (m.kind == MoveKind::Slide) {
                int j = find(m.from);
                if (j >= 0) {
                    st[j].virt = false;
                    st[j].pending = idx;
                    st[j].subst = m.to;
                }
            }
            int i = find(m.to);
            if (i >= 0) {
                st[i].virt = true;
                st[i].pending = kNoIndex;
                if (!st[i].ever) {
                    st[i].ever = true;
                    if (++ever_count == members.size()) finalize();
                }
            }
        }
        ++idx;
    }

    void finalize() {
        plan.found = true;
        plan.cut = idx;
        std::vector<std::pair<std::uint64_t, std::size_t>> held;
        for (std::size_t i = 0; i < st.size(); ++i)
            if (!st[i].virt) held.emplace_back(st[i].pending, i);
        std::sort(held.begin(), held.end());
        // Slide source: a held member, preferring one no enclosing replay
        // keeps pebbled. Consuming an enclosing replay's member is still
        // sound (that replay substitutes a placement when it skips the
        // consumption); placing instead would stack an extra pebble on top of
        // the held ones and can exceed the space bound by one.
        VertexId best = kNoVertex;
        for (auto& [pending, i] : held) {
            plan.skip_idx.push_back(pending);
            plan.skip_subst.push_back(st[i].subst);
            if (holds[members[i]] < 2) best = std::min(best, members[i]);
        }
        if (best == kNoVertex && !held.empty()) {
            best = members[held.front().second];
            for (auto& [pending, i] : held) best = std::min(best, members[i]);
        }
        if (best != kNoVertex) {
            plan.slide_mode = true;
            plan.slide_from = best;
        }
        for (auto& [pending, i] : held)
            if (!(plan.slide_mode && members[i] == best)) plan.restores.push_back(members[i]);
        std::sort(plan.restores.begin(), plan.restores.end());
    }

    const std::vector<VertexId>& members;
    const std::vector<std::uint16_t>& holds;
    std::vector<MState> st;
    std::size_t ever_count = 0;
    std::uint64_t idx = 0;
    GroupPlan plan;
};

struct GroupEmitter final : MoveSink {
    GroupEmitter(MoveSink& out_, const GroupPlan& plan_, VertexId target_,
                 std::function<void(MoveSink&)> inject_)
        : out(out_), plan(plan_), target(target_), inject(std::move(inject_)) {}

    void push(const Move& m) override {
        if (ptr < plan.skip_idx.size() && idx == plan.skip_idx[ptr]) {
            VertexId subst = plan.skip_subst[ptr];
            ++ptr;
            if (subst != kNoVertex) out.push(Move::place(subst));
        } else {
            out.push(m);
        }
        if (idx == plan.cut) {
            if (plan.slide_mode)
                out.push(Move::slide(plan.slide_from, target));
            else
                out.push(Move::place(target));
            inject(out);
            for (VertexId r : plan.restores) out.push(Move::remove(r));
        }
        ++idx;
    }

    MoveSink& out;
    const GroupPlan& plan;
    VertexId target;
    std::function<void(MoveSink&)> inject;
    std::uint64_t idx = 0;
    std::size_t ptr = 0;
};

struct DecompScheduleGen final : Schedule::Gen {
    DecompScheduleGen(Dag d, const std::vector<DecompositionPart>& parts) : dag(std::move(d)) {
        part_start.push_back(0);
        for (const auto& p : parts) {
            order.insert(order.end(), p.segment.begin(), p.segment.end());
            part_start.push_back(static_cast<std::uint32_t>(order.size()));
        }
        pos.assign(dag.vertex_count(), 0);
        for (std::uint32_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    }

    void emit(MoveSink& sink) const override {
        std::vector<std::uint16_t> holds(dag.vertex_count(), 0);
        emit_level(part_start.size() - 1, sink, holds);
    }

    void emit_level(std::size_t k, MoveSink& sink, std::vector<std::uint16_t>& holds) const {
        const std::uint32_t lo = part_start[k - 1], hi = part_start[k];
        if (k == 1) {
            emit_topo_sequence(dag, std::span<const VertexId>(order.data(), hi), sink);
            return;
        }
        bool any_linked = false;
        for (std::uint32_t j = lo; j < hi && !any_linked; ++j)
            for (VertexId p : dag.preds(order[j]))
                if (pos[p] < lo) {
                    any_linked = true;
                    break;
                }
        if (!any_linked) {
            emit_level(k - 1, sink, holds);
            emit_topo_sequence(dag, std::span<const VertexId>(order.data() + lo, hi - lo), sink);
            return;
        }
        std::vector<std::uint32_t> cnt(hi - lo, 0);
        for (std::uint32_t j = lo; j < hi; ++j) {
            std::uint32_t c = 0;
            for (VertexId w : dag.succs(order[j]))
                if (pos[w] >= lo && pos[w] < hi) ++c;
            cnt[j - lo] = c;
        }
        auto part_removals = [&](MoveSink& out, std::uint32_t j) {
            VertexId u = order[j];
            std::vector<VertexId> removable;
            if (cnt[j - lo] == 0) removable.push_back(u);
            for (VertexId p : dag.preds(u)) {
                std::uint32_t pp = pos[p];
                if (pp >= lo && pp < j && --cnt[pp - lo] == 0) removable.push_back(p);
            }
            std::sort(removable.begin(), removable.end());
            for (VertexId r : removable) out.push(Move::remove(r));
        };
        for (std::uint32_t j = lo; j < hi; ++j) {
            VertexId u = order[j];
            std::vector<VertexId> members;
            for (VertexId p : dag.preds(u))
                if (pos[p] < lo) members.push_back(p);
            if (members.empty()) {
                sink.push(Move::place(u));
                part_removals(sink, j);
                continue;
            }
            for (VertexId p : members) ++holds[p];
            GroupAnalyzer analyzer(members, holds);
            emit_level(k - 1, analyzer, holds);
            if (!analyzer.plan.found)
                throw GraphError("decomposition schedule: inner replay never pebbles a predecessor set");
            GroupEmitter emitter(sink, analyzer.plan, u,
                                 [&](MoveSink& out) { part_removals(out, j); });
            emit_level(k - 1, emitter, holds);
            for (VertexId p : members) --holds[p];
        }
    }

    Dag dag;
    std::vector<VertexId> order;
    std::vector<std::uint32_t> pos;
    std::vector<std::uint32_t> part_start;
};

// ---------------------------------------------------------------------------
// Lemma-6 challenging-vertices composition.

struct TranslatedEmit final : MoveSink {
    TranslatedEmit(MoveSink& out_, const std::vector<VertexId>& map_) : out(out_), map(map_) {}
    void push(const Move& m) override {
        Move t = m;
        t.to = map[m.to];
        if (m.kind == MoveKind::Slide) t.from = map[m.from];
        out.push(t);
    }
    MoveSink& out;
    const std::vector<VertexId>& map;
};

struct HoldPlan {
    std::vector<std::uint64_t> skip_idx;
    std::vector<VertexId> skip_subst;  // kNoVertex = plain suppression
};

// Scans the inner schedule restricted to targets inside `mask` and finds, for
// each member, the consumption left dangling after its final pebbling.
struct HoldAnalyzer final : MoveSink {
    HoldAnalyzer(const std::vector<std::uint8_t>& mask_, const std::vector<VertexId>& members_)
        : mask(mask_), members(members_), st(members_.size()) {}

    struct MState {
        bool virt = false;
        std::uint64_t pending = kNoIndex;
        VertexId subst = kNoVertex;
    };

    int find(VertexId v) const {
        auto it = std::lower_bound(members.begin(), members.end(), v);
        if (it == members.end() || *it != v) return -1;
        return static_cast<int>(it - members.begin());
    }

    void push(const Move& m) override {
        if (!mask[m.to]) {
            // A slide leaving the mask still consumes its in-mask source; the
            // emitter turns it into a plain removal to keep the restricted
            // state in sync.
            if (m.kind == MoveKind::Slide && mask[m.from]) {
                int j = find(m.from);
                if (j >= 0) {
                    st[j].virt = false;
                    st[j].pending = idx;
                    st[j].subst = kNoVertex;
                }
            }
            ++idx;
            return;
        }
        if (m.kind == MoveKind::Remove) {
            int i = find(m.to);
            if (i >= 0) {
                st[i].virt = false;
                st[i].pending = idx;
                st[i].subst = kNoVertex;
            }
        } else {
            if (m.kind == MoveKind::Slide) {
                int j = find(m.from);
                if (j >= 0) {
                    st[j].virt = false;
                    st[j].pending = idx;
                    st[j].subst = m.to;
                }
            }
            int i = find(m.to);
            if (i >= 0) {
                st[i].virt = true;
                st[i].pending = kNoIndex;
            }
        }
        ++idx;
    }

    HoldPlan take_plan() {
        std::vector<std::pair<std::uint64_t, VertexId>> held;
        for (std::size_t i = 0; i < st.size(); ++i)
            if (!st[i].virt && st[i].pending != kNoIndex) held.emplace_back(st[i].pending, st[i].subst);
        std::sort(held.begin(), held.end());
        HoldPlan plan;
        for (auto& [p, s] : held) {
            plan.skip_idx.push_back(p);
            plan.skip_subst.push_back(s);
        }
        return plan;
    }

    const std::vector<std::uint8_t>& mask;
    const std::vector<VertexId>& members;
    std::vector<MState> st;
    std::uint64_t idx = 0;
};

struct FilteredEmit final : MoveSink {
    FilteredEmit(MoveSink& out_, const std::vector<std::uint8_t>& mask_, const HoldPlan& plan_,
                 const std::vector<VertexId>& map_)
        : out(out_), mask(mask_), plan(plan_), map(map_) {}

    void push(const Move& m) override {
        bool at_skip = ptr < plan.skip_idx.size() && idx == plan.skip_idx[ptr];
        if (!mask[m.to]) {
            if (m.kind == MoveKind::Slide && mask[m.from]) {
                // outbound slide: consumes the in-mask source
                if (at_skip)
                    ++ptr;  // held member: drop the consumption entirely
                else
                    out.push(Move::remove(map[m.from]));
            }
            ++idx;
            return;
        }
        if (at_skip) {
            VertexId subst = plan.skip_subst[ptr];
            ++ptr;
            if (subst != kNoVertex) out.push(Move::place(map[subst]));
        } else {
            Move t = m;
            t.to = map[m.to];
            if (m.kind == MoveKind::Slide) t.from = map[m.from];
            out.push(t);
        }
        ++idx;
    }

    MoveSink& out;
    const std::vector<std::uint8_t>& mask;
    const HoldPlan& plan;
    const std::vector<VertexId>& map;
    std::uint64_t idx = 0;
    std::size_t ptr = 0;
};

struct ChallengeGen final : Schedule::Gen {
    explicit ChallengeGen(Dag d) : dag(std::move(d)) {}

    void emit(MoveSink& sink) const override {
        std::uint32_t n = dag.vertex_count();
        struct Track final : MoveSink {
            Track(MoveSink& o, std::vector<char>& p) : out(o), peb(p) {}
            void push(const Move& m) override {
                if (m.kind == MoveKind::Remove) {
                    peb[m.to] = 0;
                } else {
                    if (m.kind == MoveKind::Slide) peb[m.from] = 0;
                    peb[m.to] = 1;
                }
                out.push(m);
            }
            MoveSink& out;
            std::vector<char>& peb;
        };
        std::vector<char> pebbled(n, 0);
        std::vector<char> keep(n, 0);
        Track track(sink, pebbled);
        for (std::size_t i = 0; i < challenging.size(); ++i) {
            VertexId w = challenging[i];
            if (has_reduced) {
                HoldAnalyzer analyzer(anc[i], hold_sets[i]);
                inner.emit(analyzer);
                HoldPlan plan = analyzer.take_plan();
                FilteredEmit fe(track, anc[i], plan, to_parent);
                inner.emit(fe);
            }
            track.push(Move::place(w));
            keep[w] = 1;
            for (VertexId v = 0; v < n; ++v)
                if (pebbled[v] && !keep[v]) track.push(Move::remove(v));
        }
        if (has_reduced) {
            TranslatedEmit te(track, to_parent);
            inner.emit(te);
        }
    }

    Dag dag;
    std::vector<VertexId> challenging;  // topological order of the parent graph
    bool has_reduced = false;
    Schedule inner;                     // local ids of the reduced graph
    std::vector<VertexId> to_parent;
    std::vector<std::vector<std::uint8_t>> anc;        // per w: reduced-id closure mask
    std::vector<std::vector<VertexId>> hold_sets;      // per w: reduced ids of kept parents
};

struct ChallengeBuild {
    Schedule schedule;
    std::uint64_t s_prime = 0;
    std::uint64_t t_prime = 0;
};

ChallengeBuild build_challenging(const Dag& dag, std::vector<VertexId> challenging,
                                 const std::function<SchedulerReport(const Dag&)>& inner_fn,
                                 nlohmann::json* inner_params) {
    std::uint32_t n = dag.vertex_count();
    {
        std::vector<char> seen(n, 0);
        for (VertexId w : challenging) {
            if (w >= n) throw GraphError("challenging vertex out of range");
            if (seen[w]) throw GraphError("duplicate challenging vertex");
            seen[w] = 1;
        }
    }
    TopoOrder topo = topological_sort(dag);
    std::sort(challenging.begin(), challenging.end(),
              [&](VertexId a, VertexId b) { return topo.rank[a] < topo.rank[b]; });

    auto gen = std::make_shared<ChallengeGen>(dag);
    gen->challenging = challenging;

    ChallengeBuild out;
    std::vector<char> in_w(n, 0);
    for (VertexId w : challenging) in_w[w] = 1;
    std::vector<VertexId> rest;
    for (VertexId v = 0; v < n; ++v)
        if (!in_w[v]) rest.push_back(v);

    if (!rest.empty()) {
        Subdag sub = induced_subdag(dag, rest);
        SchedulerReport inner_rep = inner_fn(sub.graph);
        if (inner_params) {
            *inner_params = {{"strategy", inner_rep.strategy},
                             {"S_bound", inner_rep.space_bound},
                             {"params", inner_rep.params}};
        }
        PebbleMetrics metrics;
        try {
            metrics = simulate(sub.graph, inner_rep.schedule);
        } catch (const IllegalMoveError& e) {
            throw GraphError(std::string("inner schedule illegal: ") + e.what());
        }
        if (!metrics.full(sub.graph.vertex_count()))
            throw GraphError("inner schedule does not pebble the reduced graph fully");
        out.s_prime = metrics.peak_pebbles;
        out.t_prime = metrics.move_count;
        Schedule inner = inner_rep.schedule;
        if (metrics.move_count <= kMaterializeCap && !inner.moves_if_materialized())
            inner = Schedule::from_moves(inner.materialize(kMaterializeCap));
        gen->has_reduced = true;
        gen->inner = inner;
        gen->to_parent = sub.to_parent;

        std::vector<std::uint32_t> local(n, kNoVertex);
        for (std::uint32_t i = 0; i < sub.to_parent.size(); ++i) local[sub.to_parent[i]] = i;
        gen->anc.resize(challenging.size());
        gen->hold_sets.resize(challenging.size());
        for (std::size_t i = 0; i < challenging.size(); ++i) {
            std::vector<std::uint8_t> mask(sub.graph.vertex_count(), 0);
            std::vector<VertexId> holds;
            std::vector<VertexId> stack;
            for (VertexId p : dag.preds(challenging[i])) {
                if (local[p] == kNoVertex) continue;  // predecessor inside W
                VertexId lp = local[p];
                holds.push_back(lp);
                if (!mask[lp]) {
                    mask[lp] = 1;
                    stack.push_back(lp);
                }
            }
            while (!stack.empty()) {
                VertexId v = stack.back();
                stack.pop_back();
                for (VertexId q : sub.graph.preds(v))
                    if (!mask[q]) {
                        mask[q] = 1;
                        stack.push_back(q);
                    }
            }
            std::sort(holds.begin(), holds.end());
            gen->anc[i] = std::move(mask);
            gen->hold_sets[i] = std::move(holds);
        }
    }
    out.schedule = Schedule::from_generator(gen);
    return out;
}

// Inner scheduler used by pebble_general: Theorem-1 pipeline when its
// preconditions hold, else the plain topological schedule.
SchedulerReport bounded_degree_with_fallback(const Dag& dag) {
    try {
        return pebble_bounded_degree(dag, BoundedDegreeMode::Theorem1);
    } catch (const PreconditionError&) {
        SchedulerReport rep = topo_schedule(dag, topological_sort(dag));
        rep.params["fallback"] = "in-degree above log2 m on reduced graph";
        return rep;
    }
}

// ---------------------------------------------------------------------------
// Classic depth recursion (l(d-1)+1).

struct DepthWalkGen final : Schedule::Gen {
    explicit DepthWalkGen(Dag d) : dag(std::move(d)) {}
    void emit(MoveSink& sink) const override {
        std::vector<char> pebbled(dag.vertex_count(), 0);
        for (VertexId v = 0; v < dag.vertex_count(); ++v) {
            if (!dag.succs(v).empty()) continue;
            pebble(v, sink, pebbled);
            sink.push(Move::remove(v));
            pebbled[v] = 0;
        }
    }
    // Ensures v is pebbled, holding predecessors that callers higher up the
    // recursion already pebbled; everything pebbled by this call except v is
    // removed again. Slides only consume pebbles this call placed itself.
    void pebble(VertexId v, MoveSink& sink, std::vector<char>& pebbled) const {
        if (pebbled[v]) return;
        auto preds = dag.preds(v);
        if (preds.empty()) {
            sink.push(Move::place(v));
            pebbled[v] = 1;
            return;
        }
        std::vector<VertexId> fresh;
        for (VertexId p : preds) {
            if (pebbled[p]) continue;
            pebble(p, sink, pebbled);
            fresh.push_back(p);
        }
        if (fresh.empty()) {
            sink.push(Move::place(v));
        } else {
            VertexId source = fresh.back();
            fresh.pop_back();
            sink.push(Move::slide(source, v));
            pebbled[source] = 0;
            for (VertexId p : fresh) {
                sink.push(Move::remove(p));
                pebbled[p] = 0;
            }
        }
        pebbled[v] = 1;
    }
    Dag dag;
};

TimeBound lemma5_time_bound(std::uint64_t n, std::uint64_t m, std::uint32_t d, const Rat& budget) {
    if (d < 2 || budget.is_zero()) return TimeBound::none();
    BigNat scaled = budget.den();
    scaled.mul_u64(m);
    BigNat rem;
    BigNat q = scaled.divmod(budget.num(), rem);
    if (!q.fits_u64()) return TimeBound::none();
    std::uint64_t k = q.to_u64_saturating();
    if (k >= 20) return TimeBound::none();
    std::uint64_t parts = std::uint64_t{1} << k;
    // base = max(e, n / 2^k); the e branch uses a rational upper bound on e.
    std::uint64_t bn, bd;
    if (static_cast<unsigned __int128>(n) * 1000000 >=
        static_cast<unsigned __int128>(2718282) * parts) {
        std::uint64_t g = gcd_u64(n, parts);
        bn = n / g;
        bd = parts / g;
    } else {
        bn = 1359141;
        bd = 500000;
    }
    long double bits = static_cast<long double>(parts) * std::log2(static_cast<long double>(bn));
    if (bits > 2048) return TimeBound::none();
    BigNat num = BigNat::pow(bn, static_cast<std::uint32_t>(parts));
    num.mul_u64(2).mul_u64(d);
    BigNat den = BigNat::pow(bd, static_cast<std::uint32_t>(parts));
    den.mul_u64(d - 1);
    return TimeBound::rational(Rat(std::move(num), std::move(den)));
}

}  // namespace

SchedulerReport topo_schedule(const Dag& dag, const TopoOrder& order) {
    BoundaryProfile prof = boundary_profile(dag, order);  // also validates the order
    SchedulerReport rep;
    rep.schedule = Schedule::from_generator(std::make_shared<TopoGen>(dag, order.order));
    rep.space_bound = prof.max_value + 1;
    rep.time_bound = TimeBound::exact(2ull * dag.vertex_count());
    rep.strategy = "topo";
    rep.params = {{"boundary", prof.max_value}};
    return rep;
}

SchedulerReport schedule_from_decomposition(const Dag& dag, const BudgetDecomposition& decomp) {
    if (!dag.same_data(decomp.dag)) throw GraphError("decomposition was built for a different graph");
    std::vector<VertexId> order = decomp.concatenated_order();
    TopoOrder topo = topo_order_from(dag, order);  // validates segment concatenation
    std::uint32_t d = dag.max_in_degree();
    std::size_t parts = decomp.part_count();
    if (parts == 0) throw GraphError("decomposition has no parts");

    SegmentScanner scanner(dag);
    std::uint64_t boundary_sum = 0;
    for (const auto& p : decomp.parts) boundary_sum += scanner.scan(p.segment).max_boundary;
    std::uint64_t bound = sat_add(boundary_sum + 1,
                                  sat_mul(d > 0 ? d - 1 : 0, parts - 1));

    SchedulerReport rep;
    rep.space_bound = bound;
    rep.strategy = "decomposition";
    rep.params = {{"parts", parts}, {"boundary_sum", boundary_sum}};
    if (parts == 1) {
        rep.schedule = Schedule::from_generator(std::make_shared<TopoGen>(dag, topo.order));
        rep.time_bound = TimeBound::exact(2ull * dag.vertex_count());
        return rep;
    }
    if (d <= 1) {
        rep.schedule = Schedule::from_generator(std::make_shared<UnitWalkGen>(dag));
        rep.time_bound = TimeBound::exact(rep.schedule.count());
        rep.params["path"] = "unit-walk";
        return rep;
    }
    rep.schedule = Schedule::from_generator(std::make_shared<DecompScheduleGen>(dag, decomp.parts));
    rep.time_bound = TimeBound::none();
    return rep;
}

SchedulerReport pipeline_decompose_and_schedule(const Dag& dag, const Rat& budget) {
    std::uint32_t d = dag.max_in_degree();
    if (d <= 1) {
        SchedulerReport rep = unit_walk_report(dag, "pipeline");
        rep.params["budget"] = budget.to_string();
        return rep;
    }
    TopoOrder order = topological_sort(dag);
    BudgetDecomposition decomp = decompose(dag, order, budget);
    std::size_t raw_parts = decomp.part_count();
    BudgetDecomposition merged = merge_small_parts(std::move(decomp), d);
    SchedulerReport rep = schedule_from_decomposition(dag, merged);
    std::size_t parts = merged.part_count();
    // Merging trades boundary for part count, so the budget-level bound uses
    // the pre-merge count: sum(b) + 1 + (d-1)(l-1) never increases under the
    // merge and sum(b) <= B holds only pre-merge.
    rep.params["lemma3_bound"] = rep.space_bound;
    rep.space_bound = sat_add(budget.floor_u64_saturating() + 1,
                              sat_mul(d - 1, raw_parts - 1));
    rep.time_bound = lemma5_time_bound(dag.vertex_count(), dag.edge_count(), d, budget);
    rep.strategy = "pipeline";
    rep.params["budget"] = budget.to_string();
    rep.params["parts_before_merge"] = raw_parts;
    rep.params["parts"] = parts;
    return rep;
}

std::optional<Rat> select_budget(std::uint64_t m, std::uint32_t d, std::uint64_t s) {
    if (m < 1 || d < 1 || s < 1) throw PreconditionError("select_budget requires m, d, S >= 1");
    if (d == 1) {
        // cost(B) = B + 1; feasible breakpoints are m/k with m/k <= S - 1.
        if (s < 2) return std::nullopt;
        std::uint64_t k = (m + s - 2) / (s - 1);
        return Rat(m, std::max<std::uint64_t>(k, 1));
    }
    for (std::uint64_t k = 1; k <= 128; ++k) {
        unsigned __int128 pw = k < 127 ? (static_cast<unsigned __int128>(1) << k)
                                       : std::numeric_limits<unsigned __int128>::max();
        unsigned __int128 term = static_cast<unsigned __int128>(d - 1) * (pw - 1);
        if (term + 1 > s) break;  // grows with k: no larger k is feasible
        unsigned __int128 slack =
            static_cast<unsigned __int128>(k) * (s - 1 - static_cast<std::uint64_t>(term));
        if (static_cast<unsigned __int128>(m) <= slack) return Rat(m, k);
    }
    return std::nullopt;
}

SchedulerReport pebble_bounded_degree(const Dag& dag, BoundedDegreeMode mode) {
    std::uint64_t m = dag.edge_count();
    std::uint32_t d = dag.max_in_degree();
    const char* tag = mode == BoundedDegreeMode::Theorem1 ? "theorem1" : "lemma7";
    if (d <= 1) return unit_walk_report(dag, tag);

    if (mode == BoundedDegreeMode::Theorem1) {
        if (m < 4096) {
            SchedulerReport rep = topo_schedule(dag, topological_sort(dag));
            rep.strategy = tag;
            rep.params["fallback"] = "small-m topological schedule";
            return rep;
        }
        if (pow2_gt(d, m)) throw PreconditionError("in-degree exceeds log2 m; use pebble_general");
        long double lg = std::log2(static_cast<long double>(m));
        long double g = lg - 3.0L * std::log2(lg);
        auto gq = static_cast<std::uint64_t>(std::llround(g * 1048576.0L));
        Rat budget(m, 1);
        budget = budget.scaled(1048576, gq);
        SchedulerReport rep = pipeline_decompose_and_schedule(dag, budget);
        rep.strategy = tag;
        rep.params["g"] = static_cast<double>(g);
        return rep;
    }

    if (m < 2) throw PreconditionError("lemma7 requires m > 1");
    if (pow2_gt(3ull * d, m)) throw PreconditionError("in-degree exceeds log2(m)/3; use pebble_general");
    long double lg = std::log2(static_cast<long double>(m));
    auto lq = static_cast<std::uint64_t>(std::llround(lg * 1048576.0L));
    Rat budget(2 * m, 1);
    budget = budget.scaled(1048576, lq);
    SchedulerReport rep = pipeline_decompose_and_schedule(dag, budget);
    rep.strategy = tag;
    auto closed = static_cast<std::uint64_t>(std::ceil(2.8125L * m / lg));
    rep.space_bound = std::min(rep.space_bound, closed);
    rep.params["closed_form"] = closed;
    return rep;
}

SchedulerReport challenging_schedule(const Dag& dag, std::vector<VertexId> challenging,
                                     const std::function<SchedulerReport(const Dag&)>& inner) {
    std::uint64_t w_count = challenging.size();
    nlohmann::json inner_params;
    ChallengeBuild build = build_challenging(dag, std::move(challenging), inner, &inner_params);
    SchedulerReport rep;
    rep.schedule = build.schedule;
    rep.space_bound = sat_add(sat_add(build.s_prime, w_count), dag.max_in_degree());
    BigNat t(build.t_prime);
    t.add_u64(dag.vertex_count());
    t.mul_u64(w_count + 1);
    rep.time_bound = TimeBound::rational(Rat(std::move(t), BigNat(1)));
    rep.strategy = "challenging";
    rep.params = {{"W", w_count}, {"S_prime", build.s_prime}, {"T_prime", build.t_prime}};
    if (!inner_params.is_null()) rep.params["inner"] = inner_params;
    return rep;
}

SchedulerReport pebble_general(const Dag& dag) {
    std::uint64_t m = dag.edge_count();
    std::uint32_t d = dag.max_in_degree();
    if (m <= 1) {
        SchedulerReport rep = topo_schedule(dag, topological_sort(dag));
        rep.strategy = "general";
        rep.params["fallback"] = "m <= 1 direct schedule";
        return rep;
    }
    std::vector<VertexId> w;
    for (VertexId v = 0; v < dag.vertex_count(); ++v)
        if (pow2_gt(dag.in_degree(v), m)) w.push_back(v);
    nlohmann::json inner_params;
    ChallengeBuild build = build_challenging(dag, w, bounded_degree_with_fallback, &inner_params);
    SchedulerReport rep;
    rep.schedule = build.schedule;
    rep.space_bound = sat_add(sat_add(build.s_prime, w.size()), d);
    BigNat t(build.t_prime);
    t.add_u64(dag.vertex_count());
    t.mul_u64(w.size() + 1);
    rep.time_bound = TimeBound::rational(Rat(std::move(t), BigNat(1)));
    rep.strategy = "general";
    rep.params = {{"W", w.size()},
                  {"S_prime", build.s_prime},
                  {"T_prime", build.t_prime},
                  {"d", d}};
    if (!inner_params.is_null()) rep.params["inner"] = inner_params;
    return rep;
}

SchedulerReport depth_recursive_schedule(const Dag& dag) {
    std::uint32_t l = topological_depth(dag);
    std::uint32_t d = dag.max_in_degree();
    SchedulerReport rep;
    rep.schedule = Schedule::from_generator(std::make_shared<DepthWalkGen>(dag));
    rep.space_bound = sat_add(sat_mul(l, d > 0 ? d - 1 : 0), 1);
    rep.time_bound = TimeBound::none();
    rep.strategy = "depth-classic";
    rep.params = {{"l", l}, {"d", d}};
    return rep;
}

SchedulerReport pebble_by_depth(const Dag& dag) {
    std::uint64_t m = dag.edge_count();
    std::uint32_t d = dag.max_in_degree();
    std::uint32_t l = topological_depth(dag);
    if (m == 0) {
        SchedulerReport rep = topo_schedule(dag, topological_sort(dag));
        rep.strategy = "theorem4";
        rep.space_bound = sat_add(1, d);
        rep.params["fallback"] = "edgeless graph";
        return rep;
    }
    std::uint64_t classic = sat_add(sat_mul(l, d - 1), 1);
    std::uint64_t two_sqrt_ml = ceil_sqrt(4 * m * static_cast<std::uint64_t>(l));
    std::uint64_t t4 = sat_add(two_sqrt_ml - l + 1, d);
    if (t4 > classic) {
        SchedulerReport rep = depth_recursive_schedule(dag);
        rep.strategy = "theorem4";
        rep.params["fallback"] = "classic depth bound is tighter";
        rep.params["theorem4_bound"] = t4;
        return rep;
    }
    std::vector<VertexId> candidates;
    for (VertexId v = 0; v < dag.vertex_count(); ++v) {
        std::uint64_t deg = dag.in_degree(v);
        if (deg * deg * l >= m) candidates.push_back(v);
    }
    std::sort(candidates.begin(), candidates.end(), [&](VertexId a, VertexId b) {
        if (dag.in_degree(a) != dag.in_degree(b)) return dag.in_degree(a) > dag.in_degree(b);
        return a < b;
    });
    std::uint64_t cap = ceil_sqrt(m * static_cast<std::uint64_t>(l));
    if (candidates.size() > cap) candidates.resize(cap);
    nlohmann::json inner_params;
    ChallengeBuild build = build_challenging(dag, candidates, depth_recursive_schedule, &inner_params);
    SchedulerReport rep;
    rep.schedule = build.schedule;
    rep.space_bound = t4;
    rep.time_bound = TimeBound::none();
    rep.strategy = "theorem4";
    rep.params = {{"W", candidates.size()},
                  {"S_prime", build.s_prime},
                  {"l", l},
                  {"classic_bound", classic}};
    if (!inner_params.is_null()) rep.params["inner"] = inner_params;
    return rep;
}

void check_separator_contract(const Dag& dag, const SeparatorResult& sep, int level) {
    std::uint32_t n = dag.vertex_count();
    std::vector<std::uint8_t> side(n, 0);  // 1 = left, 2 = sep, 3 = right
    auto mark = [&](const std::vector<VertexId>& vs, std::uint8_t tag) {
        for (VertexId v : vs) {
            if (v >= n) throw SeparatorContractError("separator names unknown vertex", level);
            if (side[v] != 0) throw SeparatorContractError("separator parts overlap", level);
            side[v] = tag;
        }
    };
    mark(sep.left, 1);
    mark(sep.separator, 2);
    mark(sep.right, 3);
    for (VertexId v = 0; v < n; ++v)
        if (side[v] == 0) throw SeparatorContractError("separator does not cover all vertices", level);
    for (VertexId v = 0; v < n; ++v)
        for (VertexId w : dag.succs(v)) {
            if ((side[v] == 1 && side[w] == 3) || (side[v] == 3 && side[w] == 1))
                throw SeparatorContractError("edge crosses between left and right", level);
        }
    std::uint64_t mx = std::max(sep.left.size(), sep.right.size());
    if (3 * mx > 2ull * n)
        throw SeparatorContractError("separator sides are unbalanced", level);
}

SchedulerReport pebble_with_separator(const Dag& dag, const SeparatorOracle& oracle) {
    struct Rec {
        Schedule schedule;  // local ids of its graph
        std::uint64_t bound = 0;
        bool certified = true;
    };
    std::function<Rec(const Dag&, int)> rec = [&](const Dag& g, int level) -> Rec {
        std::uint32_t n = g.vertex_count();
        if (n <= 4) {
            SchedulerReport base = topo_schedule(g, topological_sort(g));
            return {base.schedule, base.space_bound, true};
        }
        SeparatorResult sep = oracle(g);
        check_separator_contract(g, sep, level);
        bool cert = static_cast<std::uint64_t>(sep.separator.size()) * sep.separator.size() <= 8ull * n;
        std::vector<VertexId> w = sep.separator;
        for (VertexId v = 0; v < n; ++v) {
            std::uint64_t deg = g.in_degree(v);
            if (deg * deg >= 3ull * n) w.push_back(v);
        }
        std::sort(w.begin(), w.end());
        w.erase(std::unique(w.begin(), w.end()), w.end());
        std::vector<char> in_w(n, 0);
        for (VertexId v : w) in_w[v] = 1;
        std::vector<VertexId> rest;
        for (VertexId v = 0; v < n; ++v)
            if (!in_w[v]) rest.push_back(v);

        Schedule inner;
        std::uint64_t inner_bound = 0;
        if (!rest.empty()) {
            Subdag sub = induced_subdag(g, rest);
            for (const auto& comp : weak_components(sub.graph)) {
                Subdag comp_sub = induced_subdag(sub.graph, comp);
                Rec r = rec(comp_sub.graph, level + 1);
                cert = cert && r.certified;
                inner_bound = std::max(inner_bound, r.bound);
                // Remap to the reduced graph's ids and make the component
                // schedule emptying so components compose at max peak.
                PebbleMetrics mm = simulate(comp_sub.graph, r.schedule);
                std::vector<Move> tail;
                for (VertexId v = 0; v < comp_sub.graph.vertex_count(); ++v)
                    if (mm.final_config[v]) tail.push_back(Move::remove(v));
                Schedule emptied = Schedule::concat(r.schedule, Schedule::from_moves(std::move(tail)));
                struct RemapGen final : Schedule::Gen {
                    RemapGen(Schedule s, std::vector<VertexId> m) : base(std::move(s)), map(std::move(m)) {}
                    void emit(MoveSink& sink) const override {
                        TranslatedEmit te(sink, map);
                        base.emit(te);
                    }
                    Schedule base;
                    std::vector<VertexId> map;
                };
                Schedule remapped = Schedule::from_generator(
                    std::make_shared<RemapGen>(std::move(emptied), comp_sub.to_parent));
                inner = Schedule::concat(std::move(inner), std::move(remapped));
            }
        }
        auto inner_fn = [&](const Dag&) -> SchedulerReport {
            SchedulerReport r;
            r.schedule = inner;
            r.space_bound = inner_bound;
            r.strategy = "separator-components";
            return r;
        };
        ChallengeBuild build = build_challenging(g, w, inner_fn, nullptr);
        Rec out;
        out.schedule = build.schedule;
        out.bound = sat_add(sat_add(inner_bound, w.size()), g.max_in_degree());
        out.certified = cert;
        return out;
    };

    Rec top = rec(dag, 0);
    SchedulerReport rep;
    rep.schedule = top.schedule;
    rep.space_bound = top.bound;
    rep.time_bound = TimeBound::none();
    rep.strategy = "separator";
    double closed = 6.0 * (std::sqrt(2.0) + std::sqrt(3.0)) * (1.0 + std::sqrt(2.0 / 3.0)) *
                        std::sqrt(static_cast<double>(dag.vertex_count())) +
                    dag.max_in_degree();
    rep.params = {{"certified", top.certified}, {"closed_form", closed}};
    return rep;
}

nlohmann::json report_to_json(const SchedulerReport& report, const PebbleMetrics& metrics) {
    return {{"strategy", report.strategy},
            {"params", report.params},
            {"S_bound", report.space_bound},
            {"T_bound", report.time_bound.to_string()},
            {"peak", metrics.peak_pebbles},
            {"moves", metrics.move_count}};
}

}  // namespace pebble
