#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "sqavoid/errors.hpp"
#include "sqavoid/pattern_syntax.hpp"
#include "sqavoid/search.hpp"

using namespace sqavoid;

namespace {
// First n positions of mu, for the breadth-first reference count.
std::vector<Letter> unroll(const PeriodicPartialWord& mu, std::size_t n) {
    std::vector<Letter> out;
    for (std::size_t i = 0; i < n && mu.has_position(i); ++i) out.push_back(mu.at(i));
    return out;
}
} // namespace

TEST_CASE("the two lower-bound counts") {
    const Alphabet four(4), three(3);
    auto quat = parse_periodic("(0.1.2.3.)", four);
    auto a = count_compatible_square_free(quat, four);
    CHECK(a.status == SearchStatus::Exhausted);
    CHECK(a.count == 636);
    CHECK(a.nonempty_count() == 635);
    CHECK(a.count == oracle::count_compatible(4, unroll(quat, 200)));

    auto tern = parse_periodic("({0.^5}{1.^5}{2.^5})", three);
    auto b = count_compatible_square_free(tern, three);
    CHECK(b.status == SearchStatus::Exhausted);
    CHECK(b.count == 4281);
    CHECK(b.nonempty_count() == 4280);
    CHECK(b.count == oracle::count_compatible(3, unroll(tern, 300)));
}

TEST_CASE("00 followed by holes") {
    const Alphabet three(3);
    auto r = count_compatible_square_free(parse_periodic("00(.)", three), three);
    CHECK(r.status == SearchStatus::Exhausted);
    CHECK(r.nonempty_count() == 1);
    CHECK(r.count == 2);
    CHECK(r.max_depth == 1);
    CHECK(to_string(r.witness) == "0");
}

TEST_CASE("summary line") {
    const Alphabet four(4);
    auto r = count_compatible_square_free(parse_periodic("(0.1.2.3.)", four), four);
    CHECK(r.summary() == "status=exhausted count=636 max_depth=38 nonempty=635 convention=include-empty");
}

TEST_CASE("witness and tree consistency") {
    const Alphabet four(4);
    auto mu = parse_periodic("(0.1.2.3.)", four);
    auto r = count_compatible_square_free(mu, four);
    CHECK(is_square_free(r.witness));
    CHECK(compatible(r.witness, mu));
    CHECK(r.witness.size() == r.max_depth);
    CHECK(std::accumulate(r.root_counts.begin(), r.root_counts.end(), std::uint64_t{0}) == r.nonempty_count());

    std::vector<Letter> order{3, 1, 0, 2};
    auto shuffled = count_compatible_square_free(mu, four, {}, order);
    CHECK(shuffled.count == r.count);
    CHECK(shuffled.root_counts == r.root_counts);
    std::vector<Letter> bad{0, 0, 1, 2};
    CHECK_THROWS_AS(count_compatible_square_free(mu, four, {}, bad), ValidationError);
}

TEST_CASE("all holes with a length cap counts ternary square-free words") {
    const Alphabet three(3);
    for (std::size_t cap = 1; cap <= 12; ++cap) {
        auto r = count_compatible_square_free(PeriodicPartialWord::finite(PartialWord::holes(cap)), three);
        std::uint64_t expected = 0;
        for (std::size_t n = 1; n <= cap; ++n) expected += oracle::square_free_words(3, n).size();
        CHECK(r.status == SearchStatus::Exhausted);
        CHECK(r.nonempty_count() == expected);
    }
}

TEST_CASE("relaxing a letter never lowers the count") {
    std::mt19937_64 rng(17);
    const Alphabet three(3);
    for (int round = 0; round < 50; ++round) {
        PartialWord mu = oracle::random_partial_word(rng, 3, 14, 0.6);
        auto base = count_compatible_square_free(PeriodicPartialWord::finite(mu), three);
        CHECK(base.count == oracle::count_compatible(3, mu.symbols()));
        std::vector<Letter> relaxed = mu.symbols();
        for (auto& s : relaxed) {
            if (s != kHole) {
                s = kHole;
                break;
            }
        }
        auto more = count_compatible_square_free(PeriodicPartialWord::finite(PartialWord(relaxed)), three);
        CHECK(more.count >= base.count);
    }
}

TEST_CASE("budgets are reported, never hidden") {
    const Alphabet three(3);
    auto holes = PeriodicPartialWord::cycle(PartialWord::parse(".", three));
    SearchBudget nodes;
    nodes.max_nodes = 1000;
    auto r = count_compatible_square_free(holes, three, nodes);
    CHECK(r.status == SearchStatus::BudgetExceeded);
    CHECK(r.count == 1000);
    SearchBudget len;
    len.max_length = 20;
    auto s = count_compatible_square_free(holes, three, len);
    CHECK(s.status == SearchStatus::BudgetExceeded);
    CHECK(s.max_depth == 20);
    // A tree that ends before the depth cap stays exhausted.
    SearchBudget roomy;
    roomy.max_length = 38;
    auto t = count_compatible_square_free(parse_periodic("(0.1.2.3.)", Alphabet(4)), Alphabet(4), roomy);
    CHECK(t.status == SearchStatus::Exhausted);
    SearchBudget zero;
    zero.max_nodes = 0;
    CHECK_THROWS_AS(count_compatible_square_free(holes, three, zero), ValidationError);
}

TEST_CASE("oracle walk counts") {
    LabeledGraph g = build_full_rauzy(Alphabet(3), 3);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        CHECK(oracle_walk_count(g, v, PartialWord{}) == 1);
        auto w = g.word(v);
        CHECK(oracle_walk_count(g, v, PartialWord::parse(".", Alphabet(3))) == (w[0] == w[2] ? 1 : 2));
    }
    CHECK_THROWS_AS(oracle_walk_count(g, 0, PartialWord::holes(30), 100), BudgetExceeded);
}

TEST_CASE("oracle psi image examples") {
    auto r3 = oracle_psi_image(Alphabet(3), 3);
    auto full = image_of(build_full_rauzy(Alphabet(3), 3));
    CHECK(r3 == full);
    auto bin = oracle_psi_image(Alphabet(2), 3);
    CHECK(bin.vertices.size() == 2);
    CHECK(bin.arcs.empty());
}

TEST_CASE("graph verification against the references") {
    LabeledGraph g = build_psi_graph(Alphabet(3), 5);
    auto ok = verify_psi_graph(g, 5, 20, 1);
    CHECK(ok.pass());
    CHECK(ok.walk_checks > 0);

    // Drop one arc: both the image and some walk counts must disagree.
    LabeledGraph broken(3);
    for (VertexId v = 0; v < g.vertex_count(); ++v) broken.add_vertex(g.word(v));
    auto arcs = g.arcs();
    for (std::size_t i = 1; i < arcs.size(); ++i) broken.add_arc(arcs[i].source, arcs[i].target, arcs[i].label);
    auto bad = verify_psi_graph(broken, 5, 20, 1);
    CHECK_FALSE(bad.pass());
    CHECK(bad.missing_arcs == 1);
    CHECK(bad.walk_mismatches > 0);
}
