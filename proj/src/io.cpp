#include "pebble/io.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "pebble/errors.hpp"

namespace pebble {

namespace {

struct NameInterner {
    std::unordered_map<std::string, VertexId> ids;
    std::vector<std::string> names;
    VertexId get(const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        auto id = static_cast<VertexId>(names.size());
        ids.emplace(name, id);
        names.push_back(name);
        return id;
    }
};

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

NamedDag finish(NameInterner interner, std::vector<Edge> edges,
                const std::vector<std::pair<Edge, std::size_t>>& edge_lines) {
    if (interner.names.empty()) throw ParseError(1, "no vertices (empty graph rejected)");
    // duplicate detection with line numbers before Dag construction
    {
        auto sorted = edge_lines;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i].first == sorted[i - 1].first)
                throw ParseError(sorted[i].second, "duplicate edge");
    }
    try {
        Dag dag = Dag::from_edges(static_cast<std::uint32_t>(interner.names.size()), edges);
        return {std::move(dag), std::move(interner.names)};
    } catch (const CycleError& e) {
        std::string msg = "cycle:";
        for (VertexId v : e.cycle) msg += " " + interner.names[v];
        throw CycleError(msg, e.cycle);
    }
}

NamedDag parse_dot(const std::string& text) {
    // DOT subset: `digraph <name?> { stmt; ... }` with stmt = `a -> b` or `a`,
    // optional `[...]` attribute lists ignored.
    NameInterner interner;
    std::vector<Edge> edges;
    std::vector<std::pair<Edge, std::size_t>> edge_lines;
    auto open = text.find('{');
    auto close = text.rfind('}');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError(1, "malformed digraph block");
    std::string body = text.substr(open + 1, close - open - 1);
    std::size_t line_no = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(open), '\n'));
    std::string stmt;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        char c = i < body.size() ? body[i] : ';';
        if (c == '\n') ++line_no;
        if (c != ';' && c != '\n') {
            stmt += c;
            continue;
        }
        // strip attribute list
        auto attr = stmt.find('[');
        if (attr != std::string::npos) stmt = stmt.substr(0, attr);
        std::string cleaned;
        for (std::size_t j = 0; j < stmt.size(); ++j) {
            if (stmt.compare(j, 2, "->") == 0) {
                cleaned += " -> ";
                ++j;
            } else {
                cleaned += stmt[j];
            }
        }
        auto toks = tokenize(cleaned);
        if (toks.empty()) {
            stmt.clear();
            continue;
        }
        if (toks.size() == 1) {
            interner.get(toks[0]);
        } else if (toks.size() == 3 && toks[1] == "->") {
            VertexId u = interner.get(toks[0]);
            VertexId v = interner.get(toks[2]);
            if (u == v) throw ParseError(line_no, "self-loop on " + toks[0]);
            edges.emplace_back(u, v);
            edge_lines.push_back({{u, v}, line_no});
        } else {
            throw ParseError(line_no, "unsupported DOT statement: " + stmt);
        }
        stmt.clear();
    }
    return finish(std::move(interner), std::move(edges), edge_lines);
}

}  // namespace

NamedDag parse_dag(const std::string& text) {
    // auto-detect DOT
    for (std::size_t i = 0; i < text.size();) {
        auto end = text.find('\n', i);
        if (end == std::string::npos) end = text.size();
        std::string first = text.substr(i, end - i);
        auto toks = tokenize(first);
        if (!toks.empty()) {
            if (toks[0] == "digraph") return parse_dot(text);
            break;
        }
        i = end + 1;
    }
    NameInterner interner;
    std::vector<Edge> edges;
    std::vector<std::pair<Edge, std::size_t>> edge_lines;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks.size() == 1) {
            interner.get(toks[0]);
            continue;
        }
        if (toks.size() != 2) throw ParseError(line_no, "expected `src dst`");
        VertexId u = interner.get(toks[0]);
        VertexId v = interner.get(toks[1]);
        if (u == v) throw ParseError(line_no, "self-loop on " + toks[0]);
        edges.emplace_back(u, v);
        edge_lines.push_back({{u, v}, line_no});
    }
    return finish(std::move(interner), std::move(edges), edge_lines);
}

std::string emit_edge_list(const NamedDag& g) {
    std::string out;
    std::vector<char> mentioned(g.dag.vertex_count(), 0);
    for (VertexId v = 0; v < g.dag.vertex_count(); ++v)
        for (VertexId w : g.dag.succs(v)) {
            out += g.names[v];
            out += ' ';
            out += g.names[w];
            out += '\n';
            mentioned[v] = mentioned[w] = 1;
        }
    for (VertexId v = 0; v < g.dag.vertex_count(); ++v)
        if (!mentioned[v]) {
            out += g.names[v];
            out += '\n';
        }
    return out;
}

namespace {

struct TextSink final : MoveSink {
    TextSink(const std::vector<std::string>& n, std::uint64_t c) : names(n), cap(c) {}
    void push(const Move& m) override {
        if (count++ >= cap) throw std::length_error("schedule exceeds text emission cap");
        switch (m.kind) {
            case MoveKind::Place: out += "P " + names[m.to] + "\n"; break;
            case MoveKind::Slide: out += "S " + names[m.from] + " " + names[m.to] + "\n"; break;
            case MoveKind::Remove: out += "R " + names[m.to] + "\n"; break;
        }
    }
    const std::vector<std::string>& names;
    std::uint64_t cap;
    std::uint64_t count = 0;
    std::string out;
};

}  // namespace

std::string format_schedule(const Schedule& schedule, const std::vector<std::string>& names,
                            std::uint64_t cap) {
    TextSink sink(names, cap);
    schedule.emit(sink);
    return std::move(sink.out);
}

Schedule parse_schedule(const std::string& text, const NamedDag& g) {
    std::unordered_map<std::string, VertexId> ids;
    for (VertexId v = 0; v < g.dag.vertex_count(); ++v) ids.emplace(g.names[v], v);
    auto lookup = [&](const std::string& name, std::size_t line) {
        auto it = ids.find(name);
        if (it == ids.end()) throw ParseError(line, "unknown vertex: " + name);
        return it->second;
    };
    std::vector<Move> moves;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "P" && toks.size() == 2)
            moves.push_back(Move::place(lookup(toks[1], line_no)));
        else if (toks[0] == "S" && toks.size() == 3)
            moves.push_back(Move::slide(lookup(toks[1], line_no), lookup(toks[2], line_no)));
        else if (toks[0] == "R" && toks.size() == 2)
            moves.push_back(Move::remove(lookup(toks[1], line_no)));
        else
            throw ParseError(line_no, "expected `P v`, `S u v` or `R v`");
    }
    return Schedule::from_moves(std::move(moves));
}

nlohmann::json metrics_to_json(const PebbleMetrics& metrics, const std::vector<std::string>& names) {
    nlohmann::json covered = nlohmann::json::array();
    nlohmann::json final_cfg = nlohmann::json::array();
    for (std::size_t v = 0; v < names.size(); ++v) {
        if (v < metrics.pebbled_at_least_once.size() && metrics.pebbled_at_least_once[v])
            covered.push_back(names[v]);
        if (v < metrics.final_config.size() && metrics.final_config[v]) final_cfg.push_back(names[v]);
    }
    return {{"peak", metrics.peak_pebbles},
            {"moves", metrics.move_count},
            {"covered", covered},
            {"final", final_cfg}};
}

nlohmann::json decomposition_to_json(const BudgetDecomposition& decomp,
                                     const std::vector<std::string>& names) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : decomp.parts) {
        nlohmann::json seg = nlohmann::json::array();
        for (VertexId v : p.segment) seg.push_back(names[v]);
        parts.push_back({{"segment", seg}, {"boundary", p.boundary}});
    }
    return {{"B", decomp.budget.to_string()},
            {"l", decomp.part_count()},
            {"boundary_sum", decomp.boundary_sum()},
            {"parts", parts}};
}

}  // namespace pebble
