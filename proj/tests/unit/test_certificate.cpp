#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sqavoid/certificate.hpp"
#include "sqavoid/errors.hpp"

using namespace sqavoid;

namespace {

Certificate from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_certificate(in);
}

Certificate load(const std::string& name) {
    std::ifstream in(std::string(SQAVOID_TEST_CONFIG_DIR) + "/" + name);
    REQUIRE(in);
    return parse_certificate(in);
}

// A certificate whose W has one all-hole pattern per listed length.
Certificate holes_cert(int k, std::size_t p, const std::map<std::size_t, std::pair<std::uint64_t, Rational>>& spec) {
    Certificate c;
    c.alphabet_size = k;
    c.period_bound = p;
    for (const auto& [len, fx] : spec) {
        c.patterns.push_back(PartialWord::holes(len));
        c.thresholds[len] = fx.first;
        c.weights[len] = fx.second;
    }
    return c;
}

} // namespace

TEST_CASE("rationals") {
    CHECK(to_string(parse_rational("6/8")) == "3/4");
    CHECK(to_string(parse_rational("5")) == "5");
    CHECK(to_decimal(Rational(1, 3)) == "0.333333");
    CHECK(to_decimal(Rational(-9329, 96)) == "-97.177083");
    CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
    CHECK_THROWS_AS(parse_rational("1/2x"), ValidationError);
    CHECK_THROWS_AS(parse_rational(""), ValidationError);
}

TEST_CASE("capped powers") {
    CHECK(capped_power(2, 0, 10) == 1);
    CHECK(capped_power(2, 3, 10) == 8);
    CHECK(capped_power(2, 4, 10) == 10);
    CHECK(capped_power(2, 200, 10) == 10);
    CHECK(capped_power(5, 60, ~std::uint64_t{0}) == ~std::uint64_t{0});
    CHECK(capped_power(1, 1000, 7) == 1);
}

TEST_CASE("alpha and alpha' examples") {
    auto c = holes_cert(3, 6, {{2, {1, Rational(1, 2)}}, {3, {10, Rational(1, 3)}}});
    CHECK(alpha(2, 3, c) == 12);
    CHECK(alpha_prime(3, 3, c) == 7);
    c.thresholds[3] = 3;
    CHECK(alpha_prime(3, 3, c) == 6);
    CHECK(alpha_prime(1, 3, c) == 1);
    auto one = holes_cert(5, 2, {{1, {4, Rational(1, 2)}}});
    CHECK(alpha(1, 1, one) == 1);
    CHECK_THROWS_AS(alpha(4, 3, c), ValidationError);
    CHECK_THROWS_AS(alpha_prime(0, 3, c), ValidationError);
}

TEST_CASE("alpha and alpha' match the direct sums") {
    for (int k = 2; k <= 6; ++k) {
        for (std::size_t b = 1; b <= 10; ++b) {
            for (std::uint64_t f = 1; f <= 20; ++f) {
                std::map<std::size_t, std::pair<std::uint64_t, Rational>> spec{{1, {f, Rational(1, 2)}}, {b, {f, Rational(1, 2)}}};
                auto c = holes_cert(k, 2 * b + 2, spec);
                CHECK(alpha(1, b, c) == alpha_prime(b, b, c));
                CHECK(alpha(1, b, c) == oracle::alpha(1, b, k, f));
                CHECK(alpha(b, b, c) == oracle::alpha(b, b, k, f));
                CHECK(alpha_prime(b, b, c) == oracle::alpha_prime(b, k, f));
                CHECK(alpha(b, 1, c) == oracle::alpha(b, 1, k, f));
            }
        }
    }
}

TEST_CASE("beta examples") {
    auto half = holes_cert(3, 10, {{1, {2, Rational(1, 2)}}});
    auto b = beta_table(half);
    REQUIRE(b.size() == 11);
    for (std::size_t j = 0; j <= 10; ++j) {
        Rational expected(1);
        for (std::size_t i = 0; i < j; ++i) expected /= 2;
        CHECK(b[j] == expected);
    }
    auto gaps = holes_cert(3, 12, {{4, {2, Rational(1, 2)}}, {6, {2, Rational(1, 3)}}});
    CHECK(beta_table(gaps)[5] == 0);
    CHECK(beta_table(gaps)[0] == 1);
    auto two_three = holes_cert(3, 6, {{2, {2, Rational(1, 2)}}, {3, {2, Rational(1, 3)}}});
    CHECK(beta_table(two_three)[6] == Rational(1, 8));
}

TEST_CASE("beta recurrence equals the decomposition maximum") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> len(1, 12);
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_int_distribution<long> num(1, 99);
    for (int round = 0; round < 200; ++round) {
        std::map<std::size_t, std::pair<std::uint64_t, Rational>> spec;
        const int n = count(rng);
        while (static_cast<int>(spec.size()) < n) {
            Rational q(num(rng), 100);
            q.canonicalize();
            spec[len(rng)] = {1, q};
        }
        const std::size_t max_len = spec.rbegin()->first;
        auto c = holes_cert(3, std::max<std::size_t>(30, 2 * max_len), spec);
        auto table = beta_table(c);
        std::map<std::size_t, Rational> x;
        for (const auto& [l, fx] : spec) x[l] = fx.second;
        for (std::size_t j = 0; j <= 30; ++j) {
            CHECK(table[j] == oracle::beta(x, j));
            CHECK(table[j] >= 0);
            CHECK(table[j] <= 1);
        }
        for (std::size_t i = 0; i <= 15; ++i) {
            for (std::size_t j = 0; i + j <= 30; ++j) CHECK(table[i + j] >= table[i] * table[j]);
        }
    }
}

TEST_CASE("the three shipped full-scale certificates pass") {
    struct Expect {
        const char* file;
        std::size_t patterns;
        std::size_t lengths;
    };
    for (Expect e : {Expect{"paper/six.cert", 43, 3}, Expect{"paper/quaternary.cert", 21, 3},
                     Expect{"paper/ternary.cert", 28, 10}}) {
        CAPTURE(e.file);
        Certificate c = load(e.file);
        CHECK(c.patterns.size() == e.patterns);
        CHECK(c.lengths().size() == e.lengths);
        auto r = check_certificate(c);
        CHECK(r.pass);
        CHECK(r.worst_slack >= 0);
        for (const auto& v : r.per_length) {
            CHECK(v.slack == Rational(static_cast<unsigned long>(c.f(v.length))) - v.max_term - 1 / c.x(v.length));
            CHECK(v.pass == (v.slack >= 0));
        }
    }
}

// Six-letter slack is exactly zero: the published weights are tight at length 4.
TEST_CASE("frozen slacks of the full-scale certificates") {
    auto six = check_certificate(load("paper/six.cert"));
    CHECK(six.worst_length == 4u);
    CHECK(to_string(six.worst_slack) == "0");
    auto quat = check_certificate(load("paper/quaternary.cert"));
    CHECK(quat.worst_length == 4u);
    CHECK(to_string(quat.worst_slack) == "1/100");
    auto tern = check_certificate(load("paper/ternary.cert"));
    CHECK(tern.worst_length == 9u);
    CHECK(to_string(tern.worst_slack) == "33029/3307500");
}

TEST_CASE("perturbed certificates") {
    Certificate c = load("paper/six.cert");
    c.weights[1] = Rational(1, 100);
    auto r = check_certificate(c);
    CHECK_FALSE(r.pass);
    CHECK(r.worst_length == 1);

    // One coordinate at a time; verdicts are locked.
    Certificate base = load("paper/six.cert");
    auto verdict = [](Certificate x) { return check_certificate(x).pass; };
    Certificate f1 = base;
    f1.thresholds[1] = 2;
    CHECK_FALSE(verdict(f1));
    Certificate f4 = base;
    f4.thresholds[4] = 5;
    CHECK(verdict(f4) == false);
    Certificate x1 = base;
    x1.weights[1] = Rational(2, 5) * Rational(101, 100);
    CHECK(verdict(x1) == true);
    Certificate q = load("paper/quaternary.cert");
    q.weights[6] = Rational(1, 5) * Rational(11, 10);
    CHECK(verdict(q) == false);
}

TEST_CASE("verdict ignores pattern order and duplicates") {
    Certificate c = load("paper/quaternary.cert");
    auto before = check_certificate(c);
    std::reverse(c.patterns.begin(), c.patterns.end());
    c.patterns.push_back(c.patterns.front());
    auto after = check_certificate(c);
    CHECK(after.pass == before.pass);
    CHECK(after.worst_slack == before.worst_slack);
}

TEST_CASE("certificate validation") {
    Certificate c = load("paper/six.cert");
    Certificate bad = c;
    bad.period_bound = 7;
    CHECK_THROWS_AS(check_certificate(bad), ValidationError);
    bad = c;
    bad.weights[1] = 1;
    CHECK_THROWS_AS(check_certificate(bad), ValidationError);
    bad = c;
    bad.weights[1] = 0;
    CHECK_THROWS_AS(check_certificate(bad), ValidationError);
    bad = c;
    bad.weights.erase(3);
    CHECK_THROWS_AS(check_certificate(bad), ValidationError);
    bad = c;
    bad.weights[2] = Rational(1, 2);
    CHECK_THROWS_AS(check_certificate(bad), ValidationError);
    bad = c;
    bad.thresholds[3] = 0;
    CHECK_THROWS_AS(check_certificate(bad), ValidationError);
}

TEST_CASE("singleton condition") {
    auto pass = check_singleton(2, 1, 10, Rational(51, 100));
    CHECK(pass.pass);
    // 2 (1 - (51/100)^9 / (49/100)) against 100/51, evaluated by hand-rolled arithmetic
    Rational x(51, 100), xp = 1;
    for (int i = 0; i < 9; ++i) xp *= x;
    CHECK(pass.lhs == 2 * (1 - xp / (1 - x)));
    CHECK(pass.rhs == Rational(100, 51));
    CHECK(pass.slack == pass.lhs - pass.rhs);

    auto half = check_singleton(2, 1, 10, Rational(1, 2));
    CHECK_FALSE(half.pass);
    CHECK(half.lhs == 2 - Rational(1, 128));
    auto three = check_singleton(3, 1, 10, Rational(1, 2));
    CHECK(three.pass);
    CHECK(three.lhs == 3 * (1 - Rational(1, 256)));
    for (std::size_t len : {1, 2, 5}) {
        for (Rational y : {Rational(1, 10), Rational(1, 2), Rational(9, 10)}) CHECK_FALSE(check_singleton(1, len, 10 * len, y).pass);
    }
    CHECK_THROWS_AS(check_singleton(2, 3, 10, Rational(1, 2)), ValidationError);
    CHECK_THROWS_AS(check_singleton(2, 3, 3, Rational(1, 2)), ValidationError);
    CHECK_THROWS_AS(check_singleton(2, 1, 10, Rational(1)), ValidationError);
    CHECK_THROWS_AS(check_singleton(0, 1, 10, Rational(1, 2)), ValidationError);
}

TEST_CASE("certificate text format") {
    Certificate c = load("paper/ternary.cert");
    std::ostringstream out;
    write_certificate(out, c);
    Certificate back = from_text(out.str());
    CHECK(back.alphabet_size == c.alphabet_size);
    CHECK(back.period_bound == c.period_bound);
    CHECK(back.patterns == c.patterns);
    CHECK(back.thresholds == c.thresholds);
    CHECK(back.weights == c.weights);

    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            from_text(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return SIZE_MAX;
    };
    CHECK(line_of("CERT v2\n") == 1);
    CHECK(line_of("CERT v1\nk=3\np=6\nf 1\n") == 4);
    CHECK(line_of("CERT v1\npattern .\n") == 2);
    CHECK(line_of("CERT v1\nk=3\np=6\nx 1 1/0\n") == 4);
    CHECK(line_of("CERT v1\nk=3\np=6\nf 1 2\nf 1 3\n") == 5);
    CHECK(line_of("CERT v1\nk=3\nwhat\n") == 3);
    CHECK(line_of("CERT v1\nk=3\n") == 0);
    CHECK(line_of("# comment\n\nCERT v1\nk=3\np=6\npattern .\nf 1 2\nx 1 1/2\n") == SIZE_MAX);
}
