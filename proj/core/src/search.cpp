#include "sqavoid/search.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <random>

#include "sqavoid/errors.hpp"

namespace sqavoid {

std::string to_string(SearchStatus status) {
    return status == SearchStatus::Exhausted ? "exhausted" : "budget_exceeded";
}

std::string SearchOutcome::summary() const {
    return "status=" + to_string(status) + " count=" + std::to_string(count) + " max_depth=" + std::to_string(max_depth) +
           " nonempty=" + std::to_string(nonempty_count()) + " convention=include-empty";
}

SearchOutcome count_compatible_square_free(const PeriodicPartialWord& mu, const Alphabet& alphabet,
                                           const SearchBudget& budget, std::span<const Letter> letter_order) {
    if (budget.max_length == 0 || budget.max_nodes == 0) throw ValidationError("search budgets must be positive");
    if (!mu.fits(alphabet)) throw ValidationError("partial word uses letters outside the alphabet");
    const int k = alphabet.size();
    std::vector<Letter> order(letter_order.begin(), letter_order.end());
    if (order.empty()) {
        order.resize(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), Letter{0});
    } else {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (int a = 0; a < k; ++a) {
            if (sorted.size() != static_cast<std::size_t>(k) || sorted[a] != a) {
                throw ValidationError("letter order is not a permutation of the alphabet");
            }
        }
    }

    SearchOutcome out;
    out.count = 1; // the empty word
    out.root_counts.assign(static_cast<std::size_t>(k), 0);
    Word word;
    // cursor[d] = next index into `order` to try below the node of depth d.
    std::vector<int> cursor{0};
    while (!cursor.empty()) {
        const std::size_t depth = word.size();
        int& c = cursor.back();
        if (c >= k || !mu.has_position(depth)) {
            cursor.pop_back();
            if (!word.empty()) word.pop_back();
            continue;
        }
        const Letter a = order[static_cast<std::size_t>(c++)];
        const Letter forced = mu.at(depth);
        if (forced != kHole && forced != a) continue;
        word.push_back(a);
        if (square_suffix_period(word) != 0) {
            word.pop_back();
            continue;
        }
        if (out.count >= budget.max_nodes) {
            out.status = SearchStatus::BudgetExceeded;
            return out;
        }
        ++out.count;
        ++out.root_counts[word.front()];
        if (word.size() > out.max_depth) {
            out.max_depth = word.size();
            out.witness = word;
        }
        if (word.size() >= budget.max_length) {
            // The subtree below is not explored; only a genuine leaf keeps the run exhaustive.
            if (mu.has_position(word.size())) {
                for (int b = 0; b < k; ++b) {
                    const Letter next = mu.at(word.size());
                    if (next != kHole && next != b) continue;
                    word.push_back(static_cast<Letter>(b));
                    bool child = square_suffix_period(word) == 0;
                    word.pop_back();
                    if (child) {
                        out.status = SearchStatus::BudgetExceeded;
                        break;
                    }
                }
            }
            word.pop_back();
            continue;
        }
        cursor.push_back(0);
    }
    return out;
}

BigInt oracle_walk_count(const LabeledGraph& g, const VertexMask& x, VertexId v, const PartialWord& w,
                         std::uint64_t max_walks) {
    if (x.size() != g.vertex_count()) throw ValidationError("vertex mask size does not match the graph");
    if (v >= g.vertex_count()) throw ValidationError("start vertex out of range");
    if (!x[v]) return 0;
    std::uint64_t walks = 0;
    const int k = g.alphabet_size();
    auto go = [&](auto&& self, VertexId at, std::size_t t) -> void {
        if (t == w.size()) {
            if (++walks > max_walks) throw BudgetExceeded("walk enumeration exceeded " + std::to_string(max_walks));
            return;
        }
        for (int a = 0; a < k; ++a) {
            if (!w.is_hole(t) && w[t] != a) continue;
            VertexId next = g.successor(at, static_cast<Letter>(a));
            if (next != kNoVertex && x[next]) self(self, next, t + 1);
        }
    };
    go(go, v, 0);
    return BigInt(static_cast<unsigned long>(walks));
}

BigInt oracle_walk_count(const LabeledGraph& g, VertexId v, const PartialWord& w, std::uint64_t max_walks) {
    return oracle_walk_count(g, full_mask(g), v, w, max_walks);
}

PsiImage oracle_psi_image(const Alphabet& alphabet, std::size_t p, std::size_t max_vertices) {
    const LabeledGraph full = build_full_rauzy(alphabet, p, max_vertices);
    PsiImage image;
    std::vector<Word> images(full.vertex_count());
    for (VertexId v = 0; v < full.vertex_count(); ++v) {
        images[v] = psi(full.word(v), p);
        image.vertices.insert(images[v]);
    }
    for (const Arc& a : full.arcs()) image.arcs.emplace(images[a.source], images[a.target], a.label);
    return image;
}

PsiImage image_of(const LabeledGraph& g) {
    PsiImage image;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        WordView w = g.word(v);
        image.vertices.emplace(w.begin(), w.end());
    }
    for (const Arc& a : g.arcs()) {
        WordView s = g.word(a.source), t = g.word(a.target);
        image.arcs.emplace(Word(s.begin(), s.end()), Word(t.begin(), t.end()), a.label);
    }
    return image;
}

OracleCheck verify_psi_graph(const LabeledGraph& g, std::size_t p, std::size_t rounds, std::uint64_t seed,
                             std::size_t max_word_length) {
    if (max_word_length == 0) throw ValidationError("max_word_length must be positive");
    const Alphabet alphabet(g.alphabet_size());
    OracleCheck check;
    check.alphabet_size = g.alphabet_size();
    check.period_bound = p;

    const PsiImage reference = oracle_psi_image(alphabet, p);
    const PsiImage actual = image_of(g);
    std::set_difference(reference.vertices.begin(), reference.vertices.end(), actual.vertices.begin(),
                        actual.vertices.end(), std::back_inserter(check.missing_vertices));
    std::set_difference(actual.vertices.begin(), actual.vertices.end(), reference.vertices.begin(),
                        reference.vertices.end(), std::back_inserter(check.extra_vertices));
    for (const auto& a : reference.arcs) check.missing_arcs += actual.arcs.count(a) == 0;
    for (const auto& a : actual.arcs) check.extra_arcs += reference.arcs.count(a) == 0;

    const LabeledGraph full = build_full_rauzy(alphabet, p);
    // Psi(v) as a vertex of g, or kNoVertex when g lacks it.
    std::vector<VertexId> image(full.vertex_count(), kNoVertex);
    for (VertexId v = 0; v < full.vertex_count(); ++v) {
        if (auto id = g.find(psi(full.word(v), p))) image[v] = *id;
    }

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(0.8);
    std::bernoulli_distribution hole(0.5);
    std::uniform_int_distribution<std::size_t> length(1, max_word_length);
    std::uniform_int_distribution<int> letter(0, alphabet.size() - 1);
    for (std::size_t round = 0; round < rounds; ++round) {
        VertexMask x = full_mask(g);
        if (round > 0) {
            for (std::size_t v = 0; v < x.size(); ++v) x[v] = keep(rng);
        }
        std::vector<Letter> symbols(length(rng));
        for (auto& s : symbols) s = hole(rng) ? kHole : static_cast<Letter>(letter(rng));
        const PartialWord w(std::move(symbols));

        VertexMask preimage(full.vertex_count());
        for (VertexId v = 0; v < full.vertex_count(); ++v) preimage[v] = image[v] != kNoVertex && x[image[v]];
        const auto upstairs = final_walk_counts(full, preimage, w);
        const auto downstairs = final_walk_counts(g, x, w);
        for (VertexId v = 0; v < full.vertex_count(); ++v) {
            if (!preimage[v] && image[v] != kNoVertex) continue; // outside Psi^-1(X)
            ++check.walk_checks;
            if (image[v] == kNoVertex || upstairs[v] != downstairs[image[v]]) ++check.walk_mismatches;
        }
    }
    return check;
}

} // namespace sqavoid
