#pragma once

// Exact verification of the counting inequality that turns a pruned Rauzy
// subgraph into an infinite family of square-free words.
//
// For every pattern length |w| the checker evaluates
//
//   f(|w|) - max_{u,v in W, 1<=r<=|v|} beta(r+p-|w|-|v|) * (alpha'(r,|w|) + x_|v| * alpha(|u|,|w|) / (1 - x_|u|))
//
// and requires it to be at least 1/x_|w|. beta(j) is the largest product of
// weights over decompositions of j into pattern lengths (0 when none exists).
// Everything is exact rational arithmetic.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "sqavoid/words.hpp"

namespace sqavoid {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses `num/den` or an integer; the result is canonical.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
/// Display-only decimal rendering, truncated toward zero.
std::string to_decimal(const Rational& q, int digits = 6);

struct Certificate {
    int alphabet_size = 0;
    std::size_t period_bound = 0;
    std::vector<PartialWord> patterns;
    std::map<std::size_t, std::uint64_t> thresholds; // f
    std::map<std::size_t, Rational> weights;         // x

    /// Distinct pattern lengths, ascending.
    std::vector<std::size_t> lengths() const;
    std::uint64_t f(std::size_t length) const;
    const Rational& x(std::size_t length) const;

    /// Throws ValidationError on any violated invariant (k >= 2, patterns fit
    /// the alphabet, p >= 2 max|w|, f >= 1 and 0 < x < 1 defined exactly on the
    /// pattern lengths).
    void validate() const;

    PatternSet pattern_set() const;
};

/// min(cap, base^exponent), stopping as soon as the power passes cap.
std::uint64_t capped_power(std::uint64_t base, std::size_t exponent, std::uint64_t cap);

BigInt alpha(std::size_t len_u, std::size_t len_v, const Certificate& cert);
BigInt alpha_prime(std::size_t i, std::size_t len_v, const Certificate& cert);

/// beta(0..p) from beta(0) = 1, beta(j) = max over lengths l <= j of x_l * beta(j - l).
std::vector<Rational> beta_table(const Certificate& cert);

struct LengthVerdict {
    std::size_t length = 0;
    std::size_t pattern_count = 0;
    bool pass = false;
    Rational max_term;
    /// f(|w|) - max_term - 1/x_|w|; the inequality holds iff slack >= 0.
    Rational slack;
    // Arg max (|u|, |v|, r) of the inner maximum.
    std::size_t witness_u = 0;
    std::size_t witness_v = 0;
    std::size_t witness_r = 0;
};

struct CheckReport {
    bool pass = false;
    std::vector<LengthVerdict> per_length;
    Rational worst_slack;
    std::size_t worst_length = 0;
};

/// Validates first (ValidationError), then evaluates every pattern length.
CheckReport check_certificate(const Certificate& cert);

struct SingletonReport {
    bool pass = false;
    Rational lhs;   // C (1 - x^(p/|w| - 1) |w|^2 / (1 - x))
    Rational rhs;   // 1 / x
    Rational slack; // lhs - rhs
};

/// Single-pattern condition with threshold C. Requires p >= 2|w|, |w| divides
/// p, 0 < x < 1 and C >= 1; throws ValidationError otherwise.
SingletonReport check_singleton(std::uint64_t threshold, std::size_t len_w, std::size_t p, const Rational& x);

/// Text format, one item per line (blank lines and '#' comments ignored):
///   CERT v1
///   k=<int>
///   p=<int>
///   pattern <shorthand>      (repeatable; see pattern_syntax.hpp)
///   f <len> <int>            (repeatable)
///   x <len> <num>/<den>      (repeatable)
/// Throws ParseError with the line number on malformed input. Semantic checks
/// are left to Certificate::validate.
Certificate parse_certificate(std::istream& in);
void write_certificate(std::ostream& out, const Certificate& cert);

} // namespace sqavoid
