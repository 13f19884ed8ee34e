#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sqavoid/errors.hpp"
#include "sqavoid/words.hpp"

using namespace sqavoid;

namespace {
const Alphabet latin(36);

Word w36(const char* s) { return parse_word(s, latin); }
} // namespace

TEST_CASE("extension check on the textbook words") {
    CHECK_FALSE(extension_is_square_free(w36("hotshot"), w36("s")[0], latin));
    CHECK(extension_is_square_free(w36("minimiz"), w36("e")[0], latin));
    CHECK(extension_is_square_free({}, 0, Alphabet(3)));
}

TEST_CASE("extension check with a bounded period") {
    const Alphabet bin(2);
    Word p = parse_word("01", bin);
    // max_period=2 forbids period 1 only
    CHECK(extension_is_square_free(p, 0, bin, 2));
    CHECK_FALSE(extension_is_square_free(p, 1, bin, 2));
    // 0101 has period 2, invisible with max_period=2
    Word q = parse_word("010", bin);
    CHECK(extension_is_square_free(q, 1, bin, 2));
    CHECK_FALSE(extension_is_square_free(q, 1, bin, 3));
}

TEST_CASE("extension check rejects letters outside the alphabet") {
    CHECK_THROWS_AS(extension_is_square_free(parse_word("01", Alphabet(3)), 3, Alphabet(3)), ValidationError);
}

TEST_CASE("is_square_free examples") {
    CHECK(is_square_free(parse_word("010", Alphabet(2))));
    CHECK(is_square_free(parse_word("0210120", Alphabet(3))));
    CHECK_FALSE(is_square_free(parse_word("0101", Alphabet(2))));
    CHECK(is_square_free(parse_word("0101", Alphabet(2)), 2));
    CHECK_FALSE(is_square_free(parse_word("0101", Alphabet(2)), 3));
    CHECK(is_square_free({}));
}

TEST_CASE("batch and incremental checks agree with the factor scan") {
    // Every word of length <= 2p over k letters, for a few small (k, p).
    for (auto [k, p] : std::vector<std::pair<int, std::size_t>>{{2, 2}, {2, 3}, {3, 3}, {3, 4}, {4, 3}}) {
        const Alphabet a(k);
        for (std::size_t n = 0; n <= 2 * p && n <= 8; ++n) {
            for (const Word& w : oracle::all_words(k, n)) {
                const bool expected = !oracle::has_square(w, p);
                CHECK(is_square_free(w, p) == expected);
                // Conjunction of incremental checks along the prefixes.
                bool incremental = true;
                for (std::size_t i = 0; i < w.size() && incremental; ++i) {
                    incremental = extension_is_square_free(WordView(w.data(), i), w[i], a, p);
                }
                CHECK(incremental == expected);
                CHECK(is_square_free(w) == !oracle::has_square(w));
            }
        }
    }
}

TEST_CASE("square_suffix_period reports the smallest period") {
    const Alphabet a(3);
    CHECK(square_suffix_period(parse_word("0101", a)) == 2);
    CHECK(square_suffix_period(parse_word("0100", a)) == 1);
    CHECK(square_suffix_period(parse_word("012", a)) == 0);
    CHECK(square_suffix_period(parse_word("012012", a)) == 3);
    CHECK(square_suffix_period(parse_word("012012", a), 3) == 0);
}

TEST_CASE("rendering and parsing") {
    CHECK(letter_to_char(0) == '0');
    CHECK(letter_to_char(10) == 'a');
    CHECK(letter_to_char(35) == 'z');
    CHECK(char_to_symbol('.') == kHole);
    CHECK_THROWS_AS(char_to_symbol('#'), ValidationError);
    CHECK(to_string(parse_word("0210120", Alphabet(3))) == "0210120");
    CHECK_THROWS_AS(parse_word("013", Alphabet(3)), ValidationError);
    CHECK_THROWS_AS(parse_word("0.1", Alphabet(3)), ValidationError);
    CHECK_THROWS_AS(Alphabet(1), ValidationError);
    CHECK_THROWS_AS(Alphabet(37), ValidationError);
    CHECK(PartialWord::parse("0.2", Alphabet(3)).to_string() == "0.2");
}

TEST_CASE("compatibility with a finite partial word") {
    const Alphabet a(3);
    const PartialWord mu = PartialWord::parse("0.2", a);
    CHECK(compatible(parse_word("012", a), mu));
    CHECK(compatible(parse_word("01", a), mu));
    CHECK_FALSE(compatible(parse_word("0122", a), mu));
    CHECK_FALSE(compatible(parse_word("112", a), mu));
    CHECK(compatible({}, mu));
}

TEST_CASE("compatibility with a periodic partial word") {
    const Alphabet a(4);
    PeriodicPartialWord mu = PeriodicPartialWord::cycle(PartialWord::parse("0.1.", a));
    CHECK(mu.to_string() == "(0.1.)");
    CHECK(mu.at(0) == 0);
    CHECK(mu.at(4) == 0);
    CHECK(mu.at(6) == 1);
    CHECK(mu.at(5) == kHole);
    CHECK(compatible(parse_word("03120312", a), mu));
    CHECK_FALSE(compatible(parse_word("031203122", a), mu));
    CHECK(mu.block(7).to_string() == "0.1.");

    PeriodicPartialWord fin = PeriodicPartialWord::finite(PartialWord::parse("00", a));
    CHECK(fin.is_finite());
    CHECK(fin.length() == 2);
    CHECK_FALSE(compatible(parse_word("000", a), fin));
}

TEST_CASE("compatibility is monotone under truncation") {
    std::mt19937_64 rng(11);
    const Alphabet a(3);
    for (int round = 0; round < 200; ++round) {
        PartialWord mu = oracle::random_partial_word(rng, 3, 8, 0.6);
        for (const Word& v : oracle::square_free_words(3, 6)) {
            if (!compatible(v, mu)) continue;
            for (std::size_t n = 0; n <= v.size(); ++n) CHECK(compatible(WordView(v.data(), n), mu));
        }
    }
    // All-hole words accept every square-free word that fits.
    for (const Word& v : oracle::square_free_words(3, 7)) {
        CHECK(compatible(v, PartialWord::holes(7)));
        CHECK(compatible(v, PartialWord::holes(9)));
        CHECK_FALSE(compatible(v, PartialWord::holes(6)));
    }
}

TEST_CASE("pattern set validation") {
    const Alphabet a(3);
    PatternSet ps;
    ps.patterns = {PartialWord::parse("..", a), PartialWord::parse(".0.", a)};
    ps.period_bound = 6;
    ps.thresholds = {{2, 1}, {3, 2}};
    CHECK_NOTHROW(ps.validate(a));
    CHECK(ps.max_length() == 3);
    CHECK(ps.threshold(3) == 2);

    auto bad = ps;
    bad.period_bound = 5; // < 2 max|w|
    CHECK_THROWS_AS(bad.validate(a), ValidationError);
    bad = ps;
    bad.thresholds.erase(2);
    CHECK_THROWS_AS(bad.validate(a), ValidationError);
    bad = ps;
    bad.thresholds[4] = 1; // no pattern of length 4
    CHECK_THROWS_AS(bad.validate(a), ValidationError);
    bad = ps;
    bad.thresholds[2] = 0;
    CHECK_THROWS_AS(bad.validate(a), ValidationError);
    bad = ps;
    bad.patterns.push_back(PartialWord{});
    CHECK_THROWS_AS(bad.validate(a), ValidationError);
    bad = ps;
    bad.patterns.push_back(PartialWord::parse(".2.", a));
    CHECK_NOTHROW(bad.validate(a));
    CHECK_THROWS_AS(bad.validate(Alphabet(2)), ValidationError);
}
