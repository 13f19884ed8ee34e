#include "sqavoid/words.hpp"

#include <algorithm>

#include "sqavoid/errors.hpp"

namespace sqavoid {

Alphabet::Alphabet(int size) : size_(size) {
    if (size < 2 || size > kMaxAlphabetSize) {
        throw ValidationError("alphabet size must be in [2, " + std::to_string(kMaxAlphabetSize) +
                              "], got " + std::to_string(size));
    }
}

char letter_to_char(Letter a) {
    if (a == kHole) return '.';
    if (a < 10) return static_cast<char>('0' + a);
    if (a < kMaxAlphabetSize) return static_cast<char>('a' + (a - 10));
    throw ValidationError("letter " + std::to_string(a) + " has no text rendering");
}

Letter char_to_symbol(char c) {
    if (c == '.') return kHole;
    if (c >= '0' && c <= '9') return static_cast<Letter>(c - '0');
    if (c >= 'a' && c <= 'z') return static_cast<Letter>(10 + (c - 'a'));
    throw ValidationError(std::string("invalid symbol '") + c + "'");
}

Word parse_word(std::string_view text, const Alphabet& alphabet) {
    Word w;
    w.reserve(text.size());
    for (char c : text) {
        Letter a = char_to_symbol(c);
        if (a == kHole) throw ValidationError("hole not allowed in a full word: " + std::string(text));
        if (!alphabet.contains(a)) {
            throw ValidationError(std::string("letter '") + c + "' outside alphabet of size " +
                                  std::to_string(alphabet.size()));
        }
        w.push_back(a);
    }
    return w;
}

std::string to_string(WordView w) {
    std::string s;
    s.reserve(w.size());
    for (Letter a : w) s.push_back(letter_to_char(a));
    return s;
}

PartialWord::PartialWord(std::vector<Letter> symbols) : symbols_(std::move(symbols)) {}

PartialWord PartialWord::parse(std::string_view text, const Alphabet& alphabet) {
    std::vector<Letter> symbols;
    symbols.reserve(text.size());
    for (char c : text) {
        Letter a = char_to_symbol(c);
        if (a != kHole && !alphabet.contains(a)) {
            throw ValidationError(std::string("letter '") + c + "' outside alphabet of size " +
                                  std::to_string(alphabet.size()));
        }
        symbols.push_back(a);
    }
    return PartialWord(std::move(symbols));
}

PartialWord PartialWord::holes(std::size_t n) { return PartialWord(std::vector<Letter>(n, kHole)); }

bool PartialWord::fits(const Alphabet& alphabet) const noexcept {
    return std::all_of(symbols_.begin(), symbols_.end(),
                       [&](Letter a) { return a == kHole || alphabet.contains(a); });
}

std::string PartialWord::to_string() const { return sqavoid::to_string(symbols_); }

namespace {

std::vector<Letter> flatten(const std::vector<PartialWord>& blocks) {
    std::vector<Letter> out;
    for (const auto& b : blocks) out.insert(out.end(), b.symbols().begin(), b.symbols().end());
    return out;
}

} // namespace

PeriodicPartialWord::PeriodicPartialWord(std::vector<PartialWord> prefix_blocks,
                                         std::vector<PartialWord> cycle_blocks)
    : prefix_blocks_(std::move(prefix_blocks)), cycle_blocks_(std::move(cycle_blocks)) {
    auto has_empty = [](const std::vector<PartialWord>& v) {
        return std::any_of(v.begin(), v.end(), [](const PartialWord& b) { return b.empty(); });
    };
    if (has_empty(prefix_blocks_) || has_empty(cycle_blocks_)) {
        throw ValidationError("periodic partial word blocks must be non-empty");
    }
    prefix_ = flatten(prefix_blocks_);
    cycle_ = flatten(cycle_blocks_);
}

PeriodicPartialWord PeriodicPartialWord::finite(PartialWord w) {
    std::vector<PartialWord> blocks;
    if (!w.empty()) blocks.push_back(std::move(w));
    return PeriodicPartialWord(std::move(blocks), {});
}

PeriodicPartialWord PeriodicPartialWord::cycle(PartialWord w) {
    return PeriodicPartialWord({}, {std::move(w)});
}

Letter PeriodicPartialWord::at(std::size_t pos) const noexcept {
    if (pos < prefix_.size()) return prefix_[pos];
    return cycle_[(pos - prefix_.size()) % cycle_.size()];
}

const PartialWord& PeriodicPartialWord::block(std::size_t i) const {
    if (i < prefix_blocks_.size()) return prefix_blocks_[i];
    if (cycle_blocks_.empty()) throw ValidationError("block index past the end of a finite word");
    return cycle_blocks_[(i - prefix_blocks_.size()) % cycle_blocks_.size()];
}

bool PeriodicPartialWord::fits(const Alphabet& alphabet) const noexcept {
    auto ok = [&](Letter a) { return a == kHole || alphabet.contains(a); };
    return std::all_of(prefix_.begin(), prefix_.end(), ok) && std::all_of(cycle_.begin(), cycle_.end(), ok);
}

std::string PeriodicPartialWord::to_string() const {
    std::string s = sqavoid::to_string(prefix_);
    if (!cycle_.empty()) s += "(" + sqavoid::to_string(cycle_) + ")";
    return s;
}

bool compatible(WordView v, const PartialWord& mu) {
    if (v.size() > mu.size()) return false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!mu.is_hole(i) && mu[i] != v[i]) return false;
    }
    return true;
}

bool compatible(WordView v, const PeriodicPartialWord& mu) {
    if (mu.is_finite() && v.size() > mu.length()) return false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Letter m = mu.at(i);
        if (m != kHole && m != v[i]) return false;
    }
    return true;
}

std::size_t square_suffix_period(WordView w, std::size_t max_period) {
    const std::size_t n = w.size();
    for (std::size_t q = 1; 2 * q <= n && q < max_period; ++q) {
        if (std::equal(w.end() - 2 * q, w.end() - q, w.end() - q)) return q;
    }
    return 0;
}

bool extension_is_square_free(WordView prefix, Letter letter, const Alphabet& alphabet, std::size_t max_period) {
    if (!alphabet.contains(letter)) {
        throw ValidationError("letter " + std::to_string(letter) + " outside alphabet of size " +
                              std::to_string(alphabet.size()));
    }
    Word extended(prefix.begin(), prefix.end());
    extended.push_back(letter);
    return square_suffix_period(extended, max_period) == 0;
}

bool is_square_free(WordView w, std::size_t max_period) {
    const std::size_t n = w.size();
    for (std::size_t q = 1; 2 * q <= n && q < max_period; ++q) {
        // run = length of the current stretch with w[i] == w[i+q]; a stretch of q is a square.
        std::size_t run = 0;
        for (std::size_t i = 0; i + q < n; ++i) {
            run = w[i] == w[i + q] ? run + 1 : 0;
            if (run >= q) return false;
        }
    }
    return true;
}

std::size_t PatternSet::max_length() const noexcept {
    std::size_t m = 0;
    for (const auto& w : patterns) m = std::max(m, w.size());
    return m;
}

void PatternSet::validate(const Alphabet& alphabet) const {
    if (patterns.empty()) throw ValidationError("pattern set is empty");
    for (const auto& w : patterns) {
        if (w.empty()) throw ValidationError("empty pattern");
        if (!w.fits(alphabet)) throw ValidationError("pattern " + w.to_string() + " uses letters outside the alphabet");
    }
    if (period_bound < 2 * max_length()) {
        throw ValidationError("period bound p=" + std::to_string(period_bound) +
                              " must be at least twice the longest pattern (" + std::to_string(max_length()) + ")");
    }
    for (const auto& w : patterns) {
        if (!thresholds.contains(w.size())) {
            throw ValidationError("no threshold f(" + std::to_string(w.size()) + ")");
        }
    }
    for (const auto& [len, f] : thresholds) {
        if (f < 1) throw ValidationError("threshold f(" + std::to_string(len) + ") must be positive");
        bool used = std::any_of(patterns.begin(), patterns.end(), [&](const PartialWord& w) { return w.size() == len; });
        if (!used) throw ValidationError("threshold f(" + std::to_string(len) + ") given for a length with no pattern");
    }
}

std::uint64_t PatternSet::threshold(std::size_t length) const {
    auto it = thresholds.find(length);
    if (it == thresholds.end()) throw ValidationError("no threshold f(" + std::to_string(length) + ")");
    return it->second;
}

void normalize_patterns(std::vector<PartialWord>& patterns) {
    std::sort(patterns.begin(), patterns.end());
    patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
}

} // namespace sqavoid
