#pragma once

// Walk counting against partial words, and the greatest vertex subset in
// which every vertex keeps enough compatible walks for every pattern.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sqavoid/rauzy.hpp"
#include "sqavoid/words.hpp"

namespace sqavoid {

using WalkCount = std::uint64_t;
inline constexpr WalkCount kNoCap = ~WalkCount{0};

/// Membership mask over the vertex ids of one graph.
using VertexMask = std::vector<bool>;

VertexMask full_mask(const LabeledGraph& g);
VertexMask mask_of(const LabeledGraph& g, std::span<const VertexId> vertices);
std::vector<VertexId> members(const VertexMask& mask);

/// counts[i][v] = number of length-i walks from v inside G[X] whose labels are
/// compatible with the last i symbols of w, saturated at `cap`. Vertices
/// outside X have count 0 in every layer.
struct WalkCountTable {
    WalkCount cap = kNoCap;
    std::vector<std::vector<WalkCount>> counts;

    std::size_t length() const noexcept { return counts.size() - 1; }
    WalkCount at(VertexId v, std::size_t i) const { return counts.at(i).at(v); }
    const std::vector<WalkCount>& last() const { return counts.back(); }
};

/// All layers i = 0..|w|. Saturating sums keep `count >= cap` exact.
WalkCountTable walk_counts(const LabeledGraph& g, const VertexMask& x, const PartialWord& w, WalkCount cap = kNoCap);

/// Only layer |w|, computed with two rolling layers.
std::vector<WalkCount> final_walk_counts(const LabeledGraph& g, const VertexMask& x, const PartialWord& w,
                                         WalkCount cap = kNoCap);

struct PrunedSubgraph {
    VertexMask mask;
    std::size_t sweeps = 0;
    std::size_t removed = 0;

    std::size_t size() const;
    bool empty() const { return size() == 0; }
    std::vector<VertexId> vertices() const { return members(mask); }
};

/// Largest X such that every v in X has at least f(|w|) compatible walks of
/// length |w| inside G[X], for every pattern w. Each pass counts walks for one
/// pattern against the current X and then drops the failing vertices; sweeps
/// over W repeat until one removes nothing. `pattern_order` (a permutation of
/// pattern indices) only changes the schedule, never the result.
PrunedSubgraph prune_fixed_point(const LabeledGraph& g, const PatternSet& ps,
                                 std::span<const std::size_t> pattern_order = {});

/// Fresh, independent check that every vertex of X keeps f(|w|) walks for
/// every pattern inside G[X]. An empty X does not certify anything and yields
/// false. Throws ValidationError when X names a vertex outside the graph.
bool certify_subgraph(const LabeledGraph& g, std::span<const VertexId> x, const PatternSet& ps);

/// `PRUNE v1 |X|=<n>`, `# graph: <graph header>`, then ascending vertex ids.
void write_pruned(std::ostream& out, const PrunedSubgraph& pruned, const std::string& graph_header);

struct LoadedPrune {
    std::string graph_header;
    std::vector<VertexId> vertices;
};

LoadedPrune read_pruned(std::istream& in);

} // namespace sqavoid
