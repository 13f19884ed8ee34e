#pragma once

// Rauzy graphs of square-free words and their Psi-compressed images.
//
// R_p(k) has the square-free words of length 2p-3 as vertices and an arc
// (au, ub, b) for every square-free aub. Label sequences of its walks are
// exactly the words with no square of period < p. The compressed graph
// replaces each vertex word by its Psi image, the shortest suffix that still
// determines which one-letter extensions create a short square.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sqavoid/words.hpp"

namespace sqavoid {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = 0xFFFFFFFFu;

struct Arc {
    VertexId source;
    VertexId target;
    Letter label;

    friend bool operator==(const Arc&, const Arc&) = default;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

enum class GraphMode { Full, Exhaustive, Reachable };

std::string to_string(GraphMode mode);
GraphMode parse_graph_mode(std::string_view text);

struct GraphMeta {
    int alphabet_size = 0;
    std::size_t period_bound = 0;
    GraphMode mode = GraphMode::Full;

    /// Psi image (true) or the raw Rauzy graph (false).
    bool compressed() const noexcept { return mode != GraphMode::Full; }

    friend bool operator==(const GraphMeta&, const GraphMeta&) = default;
};

/// Directed graph with letter-labelled arcs, at most one outgoing arc per
/// (vertex, label). Vertex words live in one contiguous arena; a hash index
/// over the arena maps words back to ids without storing them twice.
class LabeledGraph {
public:
    explicit LabeledGraph(int alphabet_size);

    int alphabet_size() const noexcept { return k_; }
    std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
    std::size_t arc_count() const noexcept { return arc_count_; }

    /// Adds a vertex, or returns the existing id when the word is already present.
    VertexId add_vertex(WordView word);
    /// Throws ValidationError on a bad endpoint/label or when (source, label)
    /// already has an arc.
    void add_arc(VertexId source, VertexId target, Letter label);

    WordView word(VertexId v) const noexcept {
        return {letters_.data() + offsets_[v], letters_.data() + offsets_[v + 1]};
    }
    VertexId successor(VertexId v, Letter label) const noexcept { return succ_[std::size_t{v} * k_ + label]; }
    std::size_t out_degree(VertexId v) const noexcept;
    std::optional<VertexId> find(WordView word) const;

    /// Arcs ordered by (source, label).
    std::vector<Arc> arcs() const;

    /// Reorders vertices by word (lexicographic, a prefix before its
    /// extensions) and remaps the arcs. Output is independent of insertion order.
    void canonicalize();

    /// Bytes held by the arena, offsets, successor table and index.
    std::size_t memory_bytes() const noexcept;

    friend bool operator==(const LabeledGraph& a, const LabeledGraph& b);

private:
    void grow_index();
    std::size_t probe(WordView word) const;

    int k_;
    std::vector<Letter> letters_;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<VertexId> succ_;
    std::size_t arc_count_ = 0;
    std::vector<VertexId> index_; // open addressing, kNoVertex marks a free slot
};

struct BuildOptions {
    GraphMode mode = GraphMode::Exhaustive;
    /// Cap on stored vertices; exceeding it throws BudgetExceeded.
    std::size_t max_vertices = 50'000'000;
    /// Number of greedy seeds for reachable mode; 0 means the alphabet size.
    std::size_t seeds = 0;
    /// Worker threads for the exhaustive enumeration. Output does not depend on it.
    unsigned threads = 1;
};

/// Raw R_p over `alphabet`, for small p. Requires p >= 2.
LabeledGraph build_full_rauzy(const Alphabet& alphabet, std::size_t p, std::size_t max_vertices = 5'000'000);

/// True when the suffix of `w` of length `len` satisfies the Psi condition:
/// for every i in {ceil(len/2)+1, ..., p-1} that suffix does not have period i.
bool psi_condition(WordView w, std::size_t len, std::size_t p);

/// Length of the shortest suffix satisfying the Psi condition, or 0 when none does.
std::size_t psi_length(WordView w, std::size_t p);

/// Shortest suffix of `w` satisfying the Psi condition. Throws ValidationError
/// when `w` has no such suffix.
Word psi(WordView w, std::size_t p);

/// Successor of a Psi state under `letter`: Psi(state·letter), or nullopt when
/// state·letter ends with a square of period < p (no such arc). Throws
/// ValidationError when state·letter has no qualifying suffix, which means
/// `state` was not a valid Psi image.
std::optional<Word> psi_step(WordView state, Letter letter, std::size_t p);

/// Compressed graph Psi(R_p). Exhaustive mode enumerates every Psi image;
/// reachable mode closes a few greedy seeds under psi_step and may be incomplete.
LabeledGraph build_psi_graph(const Alphabet& alphabet, std::size_t p, const BuildOptions& options = {});

/// Line-oriented text format:
///   RAUZY v1 k=<k> p=<p> mode=<full|exhaustive|reachable> |V|=<n> |A|=<m>
///   <n vertex words, index = line order>
///   <m lines "src dst label">
void serialize_graph(std::ostream& out, const LabeledGraph& g, const GraphMeta& meta);
std::string graph_header(const LabeledGraph& g, const GraphMeta& meta);

struct LoadedGraph {
    LabeledGraph graph;
    GraphMeta meta;
};

/// Throws ParseError (with the offending line) on malformed input.
LoadedGraph deserialize_graph(std::istream& in);

} // namespace sqavoid
