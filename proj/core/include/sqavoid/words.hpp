#pragma once

// Letters, words, partial words and square detection.
//
// Letters are the integers 0..k-1. Text form renders letter 0..9 as '0'..'9',
// 10..35 as 'a'..'z', and the hole as '.'.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sqavoid {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;
using WordView = std::span<const Letter>;

inline constexpr Letter kHole = 0xFF;
inline constexpr int kMaxAlphabetSize = 36;

/// Exclusive period bound meaning "squares of every period".
inline constexpr std::size_t kUnboundedPeriod = std::numeric_limits<std::size_t>::max();

class Alphabet {
public:
    explicit Alphabet(int size);

    int size() const noexcept { return size_; }
    bool contains(Letter a) const noexcept { return a < size_; }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    int size_;
};

char letter_to_char(Letter a);
/// Returns kHole for '.', throws ValidationError for characters outside the rendering.
Letter char_to_symbol(char c);

Word parse_word(std::string_view text, const Alphabet& alphabet);
std::string to_string(WordView w);

/// Finite word over letters and holes.
class PartialWord {
public:
    PartialWord() = default;
    explicit PartialWord(std::vector<Letter> symbols);

    static PartialWord parse(std::string_view text, const Alphabet& alphabet);
    static PartialWord holes(std::size_t n);

    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    Letter operator[](std::size_t i) const noexcept { return symbols_[i]; }
    bool is_hole(std::size_t i) const noexcept { return symbols_[i] == kHole; }
    const std::vector<Letter>& symbols() const noexcept { return symbols_; }

    /// True when every non-hole symbol is a letter of `alphabet`.
    bool fits(const Alphabet& alphabet) const noexcept;

    std::string to_string() const;

    friend bool operator==(const PartialWord&, const PartialWord&) = default;
    friend auto operator<=>(const PartialWord&, const PartialWord&) = default;

private:
    std::vector<Letter> symbols_;
};

/// Infinite (or finite) partial word given as prefix blocks followed by a
/// repeating cycle of blocks. An empty cycle makes the word finite.
class PeriodicPartialWord {
public:
    PeriodicPartialWord(std::vector<PartialWord> prefix_blocks, std::vector<PartialWord> cycle_blocks);

    static PeriodicPartialWord finite(PartialWord w);
    static PeriodicPartialWord cycle(PartialWord w);

    bool is_finite() const noexcept { return cycle_.empty(); }
    /// Only meaningful for finite words.
    std::size_t length() const noexcept { return prefix_.size(); }

    /// Symbol at 0-based position `pos`. Precondition: pos < length() when finite.
    Letter at(std::size_t pos) const noexcept;
    bool has_position(std::size_t pos) const noexcept { return !is_finite() || pos < prefix_.size(); }

    /// The i-th block (0-based) of the factorisation; blocks are produced lazily
    /// so an infinite word is never materialised.
    const PartialWord& block(std::size_t i) const;

    bool fits(const Alphabet& alphabet) const noexcept;
    std::string to_string() const;

private:
    std::vector<PartialWord> prefix_blocks_;
    std::vector<PartialWord> cycle_blocks_;
    std::vector<Letter> prefix_;
    std::vector<Letter> cycle_;
};

bool compatible(WordView v, const PartialWord& mu);
bool compatible(WordView v, const PeriodicPartialWord& mu);

/// Smallest period q < max_period such that w ends with a square of period q,
/// or 0 when no suffix of w is such a square.
std::size_t square_suffix_period(WordView w, std::size_t max_period = kUnboundedPeriod);

/// Checks whether `prefix`·`letter` ends with no square of period < max_period.
/// Only suffixes ending at the new letter are examined, so the result equals
/// square-freeness of the extension when `prefix` is itself square-free.
bool extension_is_square_free(WordView prefix, Letter letter, const Alphabet& alphabet,
                              std::size_t max_period = kUnboundedPeriod);

/// True iff w has no factor uu with 1 <= |u| < max_period.
bool is_square_free(WordView w, std::size_t max_period = kUnboundedPeriod);

/// Pattern set W with period bound p and per-length thresholds f.
struct PatternSet {
    std::vector<PartialWord> patterns;
    std::size_t period_bound = 0;
    std::map<std::size_t, std::uint64_t> thresholds;

    std::size_t max_length() const noexcept;
    /// Throws ValidationError unless: patterns non-empty and fit the alphabet,
    /// p >= 2*max|w|, thresholds >= 1 and defined exactly on the pattern lengths.
    void validate(const Alphabet& alphabet) const;
    std::uint64_t threshold(std::size_t length) const;
};

/// Sorts and removes duplicate patterns.
void normalize_patterns(std::vector<PartialWord>& patterns);

} // namespace sqavoid
