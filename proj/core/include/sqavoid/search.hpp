#pragma once

// Exhaustive backtracking over square-free words compatible with a partial
// word, plus slow reference computations used to cross-check the graph code.

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "sqavoid/certificate.hpp"
#include "sqavoid/prune.hpp"
#include "sqavoid/rauzy.hpp"
#include "sqavoid/words.hpp"

namespace sqavoid {

struct SearchBudget {
    std::size_t max_length = 10'000;
    /// Cap on search tree nodes, root included.
    std::uint64_t max_nodes = 1'000'000'000;
};

enum class SearchStatus { Exhausted, BudgetExceeded };

std::string to_string(SearchStatus status);

struct SearchOutcome {
    SearchStatus status = SearchStatus::Exhausted;
    /// Square-free words compatible with mu, the empty word included (every
    /// node of the search tree, root too). This is the convention under which
    /// the two published lower-bound counts agree.
    std::uint64_t count = 0;
    std::size_t max_depth = 0;
    /// First word found at depth max_depth.
    Word witness;
    /// Non-empty words split by first letter.
    std::vector<std::uint64_t> root_counts;

    std::uint64_t nonempty_count() const noexcept { return count == 0 ? 0 : count - 1; }

    /// `status=<..> count=<..> max_depth=<..> nonempty=<..> convention=include-empty`
    std::string summary() const;
};

/// Depth-first extension one letter at a time, pruning on any square suffix
/// (every period) and on incompatibility with mu. `letter_order`, when given,
/// is a permutation of the alphabet fixing the exploration order.
SearchOutcome count_compatible_square_free(const PeriodicPartialWord& mu, const Alphabet& alphabet,
                                           const SearchBudget& budget = {},
                                           std::span<const Letter> letter_order = {});

/// Number of length-|w| walks from v inside G[x] whose step t label is
/// compatible with w_t, by explicit enumeration of every walk.
/// Throws BudgetExceeded after `max_walks` complete walks.
BigInt oracle_walk_count(const LabeledGraph& g, const VertexMask& x, VertexId v, const PartialWord& w,
                         std::uint64_t max_walks = 100'000'000);
BigInt oracle_walk_count(const LabeledGraph& g, VertexId v, const PartialWord& w,
                         std::uint64_t max_walks = 100'000'000);

struct PsiImage {
    std::set<Word> vertices;
    std::set<std::tuple<Word, Word, Letter>> arcs;

    friend bool operator==(const PsiImage&, const PsiImage&) = default;
};

/// Psi(R_p) computed the slow way: build R_p, map every vertex and arc through psi.
PsiImage oracle_psi_image(const Alphabet& alphabet, std::size_t p, std::size_t max_vertices = 5'000'000);

/// Word/arc sets of a graph, for comparison against oracle_psi_image.
PsiImage image_of(const LabeledGraph& g);

struct OracleCheck {
    int alphabet_size = 0;
    std::size_t period_bound = 0;
    // Vertex and arc differences between the graph and the reference image.
    std::vector<Word> missing_vertices; // in the reference, not in the graph
    std::vector<Word> extra_vertices;   // in the graph, not in the reference
    std::size_t missing_arcs = 0;
    std::size_t extra_arcs = 0;
    /// (full-graph vertex, partial word, subset) triples compared, and failures.
    std::size_t walk_checks = 0;
    std::size_t walk_mismatches = 0;

    bool image_equal() const noexcept {
        return missing_vertices.empty() && extra_vertices.empty() && missing_arcs == 0 && extra_arcs == 0;
    }
    bool pass() const noexcept { return image_equal() && walk_mismatches == 0; }
};

/// Compares a compressed graph against the brute-force image of R_p, then for
/// `rounds` random (X, w) pairs checks that every vertex v of R_p has as many
/// w-compatible walks inside R_p[Psi^-1(X)] as Psi(v) has inside G[X]. The
/// first round uses X = everything. Deterministic for a fixed seed.
OracleCheck verify_psi_graph(const LabeledGraph& g, std::size_t p, std::size_t rounds, std::uint64_t seed,
                             std::size_t max_word_length = 8);

} // namespace sqavoid
