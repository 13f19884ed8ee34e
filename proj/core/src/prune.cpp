#include "sqavoid/prune.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>

#include "sqavoid/errors.hpp"

namespace sqavoid {

VertexMask full_mask(const LabeledGraph& g) { return VertexMask(g.vertex_count(), true); }

VertexMask mask_of(const LabeledGraph& g, std::span<const VertexId> vertices) {
    VertexMask mask(g.vertex_count(), false);
    for (VertexId v : vertices) {
        if (v >= g.vertex_count()) {
            throw ValidationError("vertex " + std::to_string(v) + " is not in a graph with " +
                                  std::to_string(g.vertex_count()) + " vertices");
        }
        mask[v] = true;
    }
    return mask;
}

std::vector<VertexId> members(const VertexMask& mask) {
    std::vector<VertexId> out;
    for (std::size_t v = 0; v < mask.size(); ++v) {
        if (mask[v]) out.push_back(static_cast<VertexId>(v));
    }
    return out;
}

namespace {

WalkCount saturating_add(WalkCount a, WalkCount b, WalkCount cap) {
    if (a >= cap || b >= cap - a) return cap;
    return a + b;
}

// One step of the recursion: next[v] from prev, reading `symbol`.
void step(const LabeledGraph& g, const VertexMask& x, Letter symbol, WalkCount cap,
          const std::vector<WalkCount>& prev, std::vector<WalkCount>& next) {
    const int k = g.alphabet_size();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (!x[v]) {
            next[v] = 0;
            continue;
        }
        WalkCount sum = 0;
        if (symbol == kHole) {
            for (int a = 0; a < k; ++a) {
                VertexId t = g.successor(v, static_cast<Letter>(a));
                if (t != kNoVertex && x[t]) sum = saturating_add(sum, prev[t], cap);
            }
        } else {
            VertexId t = g.successor(v, symbol);
            if (t != kNoVertex && x[t]) sum = prev[t];
        }
        next[v] = sum;
    }
}

void check_inputs(const LabeledGraph& g, const VertexMask& x, WalkCount cap) {
    if (x.size() != g.vertex_count()) throw ValidationError("vertex mask size does not match the graph");
    if (cap == 0) throw ValidationError("walk count cap must be positive");
}

std::vector<WalkCount> base_layer(const VertexMask& x) {
    std::vector<WalkCount> layer(x.size());
    for (std::size_t v = 0; v < x.size(); ++v) layer[v] = x[v] ? 1 : 0;
    return layer;
}

} // namespace

WalkCountTable walk_counts(const LabeledGraph& g, const VertexMask& x, const PartialWord& w, WalkCount cap) {
    check_inputs(g, x, cap);
    WalkCountTable table;
    table.cap = cap;
    table.counts.reserve(w.size() + 1);
    table.counts.push_back(base_layer(x));
    for (std::size_t i = 1; i <= w.size(); ++i) {
        std::vector<WalkCount> next(g.vertex_count());
        step(g, x, w[w.size() - i], cap, table.counts.back(), next);
        table.counts.push_back(std::move(next));
    }
    return table;
}

std::vector<WalkCount> final_walk_counts(const LabeledGraph& g, const VertexMask& x, const PartialWord& w,
                                         WalkCount cap) {
    check_inputs(g, x, cap);
    std::vector<WalkCount> prev = base_layer(x);
    std::vector<WalkCount> next(g.vertex_count());
    for (std::size_t i = 1; i <= w.size(); ++i) {
        step(g, x, w[w.size() - i], cap, prev, next);
        prev.swap(next);
    }
    return prev;
}

std::size_t PrunedSubgraph::size() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)); }

PrunedSubgraph prune_fixed_point(const LabeledGraph& g, const PatternSet& ps, std::span<const std::size_t> pattern_order) {
    std::vector<std::size_t> order(pattern_order.begin(), pattern_order.end());
    if (order.empty()) {
        order.resize(ps.patterns.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
    }
    {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] != i || sorted.size() != ps.patterns.size()) {
                throw ValidationError("pattern order is not a permutation of the pattern indices");
            }
        }
    }

    PrunedSubgraph result{full_mask(g), 0, 0};
    bool changed = true;
    while (changed) {
        changed = false;
        ++result.sweeps;
        for (std::size_t idx : order) {
            const PartialWord& w = ps.patterns[idx];
            const WalkCount f = ps.threshold(w.size());
            auto counts = final_walk_counts(g, result.mask, w, f);
            for (VertexId v = 0; v < g.vertex_count(); ++v) {
                if (result.mask[v] && counts[v] < f) {
                    result.mask[v] = false;
                    ++result.removed;
                    changed = true;
                }
            }
        }
    }
    return result;
}

bool certify_subgraph(const LabeledGraph& g, std::span<const VertexId> x, const PatternSet& ps) {
    VertexMask mask = mask_of(g, x);
    if (x.empty()) return false;
    for (const PartialWord& w : ps.patterns) {
        const WalkCount f = ps.threshold(w.size());
        auto counts = final_walk_counts(g, mask, w, f);
        for (VertexId v : x) {
            if (counts[v] < f) return false;
        }
    }
    return true;
}

void write_pruned(std::ostream& out, const PrunedSubgraph& pruned, const std::string& graph_header) {
    auto vs = pruned.vertices();
    out << "PRUNE v1 |X|=" << vs.size() << '\n';
    out << "# graph: " << graph_header << '\n';
    for (VertexId v : vs) out << v << '\n';
}

LoadedPrune read_pruned(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(lineno + 1, std::string("unexpected end of input, expected ") + what);
        ++lineno;
    };
    next_line("header");
    const std::string prefix = "PRUNE v1 |X|=";
    std::size_t n = 0;
    if (line.rfind(prefix, 0) != 0) throw ParseError(lineno, "expected 'PRUNE v1 |X|=<n>'");
    {
        auto tail = std::string_view(line).substr(prefix.size());
        auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), n);
        if (ec != std::errc{} || ptr != tail.data() + tail.size()) throw ParseError(lineno, "bad |X| count");
    }
    next_line("graph comment");
    const std::string comment = "# graph: ";
    if (line.rfind(comment, 0) != 0) throw ParseError(lineno, "expected '# graph: <header>'");
    LoadedPrune out;
    out.graph_header = line.substr(comment.size());
    for (std::size_t i = 0; i < n; ++i) {
        next_line("vertex id");
        VertexId v = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc{} || ptr != line.data() + line.size()) throw ParseError(lineno, "bad vertex id '" + line + "'");
        if (!out.vertices.empty() && v <= out.vertices.back()) throw ParseError(lineno, "vertex ids must be ascending");
        out.vertices.push_back(v);
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty()) throw ParseError(lineno, "content after the declared vertex ids");
    }
    return out;
}

} // namespace sqavoid
