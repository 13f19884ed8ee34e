#pragma once

// Pattern shorthand.
//
// Outside braces a pattern is plain text: '.' is a hole, '0'-'9' and 'a'-'z'
// are letters. A brace group `{body}` or `{body : i=lo..hi, j=lo..hi}` is
// expanded before use:
//
//   {.^9}                 nine holes
//   {.^i a : i=18..26}    i holes then any letter a, for i in 18..26
//   {. a . b}             hole, letter a, hole, letter b for all letters a, b
//
// Inside a group whitespace is ignored, digits are literal letters, a
// lowercase name is a letter variable ranging over the whole alphabet (the
// same name takes the same value), and `^n` / `^i` repeats the preceding
// symbol. Several groups in one pattern expand as a cartesian product.

#include <string_view>
#include <vector>

#include "sqavoid/words.hpp"

namespace sqavoid {

/// Expands shorthand into the (sorted, duplicate-free) list of patterns it denotes.
/// Throws ValidationError on malformed input.
std::vector<PartialWord> expand_patterns(std::string_view text, const Alphabet& alphabet);

/// Expands shorthand that must denote exactly one pattern.
PartialWord expand_single_pattern(std::string_view text, const Alphabet& alphabet);

/// Parses `prefix(cycle)`, `(cycle)` or `prefix`; both parts accept the
/// single-pattern shorthand, e.g. `({0.^5}{1.^5}{2.^5})` or `00(.)`.
PeriodicPartialWord parse_periodic(std::string_view text, const Alphabet& alphabet);

} // namespace sqavoid
