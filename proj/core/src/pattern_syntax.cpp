#include "sqavoid/pattern_syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>

#include "sqavoid/errors.hpp"

namespace sqavoid {
namespace {

[[noreturn]] void syntax_error(std::string_view text, const std::string& what) {
    throw ValidationError("pattern syntax: " + what + " in '" + std::string(text) + "'");
}

struct Token {
    enum class Kind { Hole, Literal, Variable } kind;
    Letter literal = 0;
    std::string variable;
    std::size_t repeat = 1;
    std::string repeat_variable; // empty when `repeat` is fixed
};

struct IntBinder {
    std::string name;
    long lo;
    long hi;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string read_name(std::string_view s, std::size_t& i) {
    std::string name;
    while (i < s.size() && std::islower(static_cast<unsigned char>(s[i]))) name.push_back(s[i++]);
    return name;
}

std::optional<long> read_number(std::string_view s, std::size_t& i) {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) return std::nullopt;
    return std::stol(std::string(s.substr(start, i - start)));
}

std::vector<Token> tokenize_body(std::string_view body, std::string_view whole) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < body.size()) {
        char c = body[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t{};
        if (c == '.') {
            t.kind = Token::Kind::Hole;
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Token::Kind::Literal;
            t.literal = static_cast<Letter>(c - '0');
            ++i;
        } else if (std::islower(static_cast<unsigned char>(c))) {
            t.kind = Token::Kind::Variable;
            t.variable = std::string(1, c);
            ++i;
        } else {
            syntax_error(whole, std::string("unexpected '") + c + "'");
        }
        while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
        if (i < body.size() && body[i] == '^') {
            ++i;
            while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
            if (auto n = read_number(body, i)) {
                t.repeat = static_cast<std::size_t>(*n);
            } else {
                t.repeat_variable = read_name(body, i);
                if (t.repeat_variable.empty()) syntax_error(whole, "expected a count after '^'");
            }
        }
        tokens.push_back(std::move(t));
    }
    return tokens;
}

std::vector<IntBinder> parse_binders(std::string_view text, std::string_view whole) {
    std::vector<IntBinder> binders;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        std::size_t i = 0;
        std::string name = read_name(item, i);
        if (name.empty() || i >= item.size() || item[i] != '=') syntax_error(whole, "binder must look like i=lo..hi");
        ++i;
        auto lo = read_number(item, i);
        if (!lo || item.substr(i, 2) != "..") syntax_error(whole, "binder must look like i=lo..hi");
        i += 2;
        auto hi = read_number(item, i);
        if (!hi || i != item.size()) syntax_error(whole, "binder must look like i=lo..hi");
        if (*lo > *hi) syntax_error(whole, "empty binder range for " + name);
        for (const auto& b : binders) {
            if (b.name == name) syntax_error(whole, "duplicate binder " + name);
        }
        binders.push_back({name, *lo, *hi});
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return binders;
}

// All expansions of one brace group, in enumeration order.
std::vector<std::vector<Letter>> expand_group(std::string_view group, const Alphabet& alphabet, std::string_view whole) {
    std::size_t colon = group.find(':');
    std::string_view body = group.substr(0, colon);
    std::vector<IntBinder> binders;
    if (colon != std::string_view::npos) binders = parse_binders(trim(group.substr(colon + 1)), whole);
    std::vector<Token> tokens = tokenize_body(body, whole);
    if (tokens.empty()) syntax_error(whole, "empty group");

    std::vector<std::string> letter_vars;
    for (const auto& t : tokens) {
        if (t.kind == Token::Kind::Literal && !alphabet.contains(t.literal)) {
            syntax_error(whole, "letter " + std::to_string(t.literal) + " outside the alphabet");
        }
        if (t.kind == Token::Kind::Variable) {
            for (const auto& b : binders) {
                if (b.name == t.variable) syntax_error(whole, "integer variable " + t.variable + " used as a letter");
            }
            if (std::find(letter_vars.begin(), letter_vars.end(), t.variable) == letter_vars.end()) {
                letter_vars.push_back(t.variable);
            }
        }
        if (!t.repeat_variable.empty()) {
            bool bound = std::any_of(binders.begin(), binders.end(),
                                     [&](const IntBinder& b) { return b.name == t.repeat_variable; });
            if (!bound) syntax_error(whole, "unbound count variable " + t.repeat_variable);
        }
    }

    std::vector<std::vector<Letter>> out;
    std::map<std::string, long> ints;
    std::map<std::string, Letter> letters;

    auto emit = [&] {
        std::vector<Letter> w;
        for (const auto& t : tokens) {
            Letter s = t.kind == Token::Kind::Hole      ? kHole
                       : t.kind == Token::Kind::Literal ? t.literal
                                                        : letters.at(t.variable);
            std::size_t n = t.repeat_variable.empty() ? t.repeat : static_cast<std::size_t>(ints.at(t.repeat_variable));
            w.insert(w.end(), n, s);
        }
        out.push_back(std::move(w));
    };
    auto assign_letters = [&](auto&& self, std::size_t idx) -> void {
        if (idx == letter_vars.size()) return emit();
        for (int a = 0; a < alphabet.size(); ++a) {
            letters[letter_vars[idx]] = static_cast<Letter>(a);
            self(self, idx + 1);
        }
    };
    auto assign_ints = [&](auto&& self, std::size_t idx) -> void {
        if (idx == binders.size()) return assign_letters(assign_letters, 0);
        for (long v = binders[idx].lo; v <= binders[idx].hi; ++v) {
            ints[binders[idx].name] = v;
            self(self, idx + 1);
        }
    };
    assign_ints(assign_ints, 0);
    return out;
}

} // namespace

std::vector<PartialWord> expand_patterns(std::string_view text, const Alphabet& alphabet) {
    std::string_view s = trim(text);
    if (s.empty()) syntax_error(text, "empty pattern");
    // Partial expansions built left to right.
    std::vector<std::vector<Letter>> acc{{}};
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '{') {
            std::size_t close = s.find('}', i);
            if (close == std::string_view::npos) syntax_error(text, "unclosed '{'");
            auto parts = expand_group(s.substr(i + 1, close - i - 1), alphabet, text);
            std::vector<std::vector<Letter>> next;
            next.reserve(acc.size() * parts.size());
            for (const auto& a : acc) {
                for (const auto& b : parts) {
                    auto w = a;
                    w.insert(w.end(), b.begin(), b.end());
                    next.push_back(std::move(w));
                }
            }
            acc = std::move(next);
            i = close + 1;
        } else {
            Letter c = char_to_symbol(s[i]);
            if (c != kHole && !alphabet.contains(c)) {
                syntax_error(text, std::string("letter '") + s[i] + "' outside the alphabet");
            }
            for (auto& w : acc) w.push_back(c);
            ++i;
        }
    }
    std::vector<PartialWord> patterns;
    patterns.reserve(acc.size());
    for (auto& w : acc) {
        if (w.empty()) syntax_error(text, "pattern expands to the empty word");
        patterns.emplace_back(std::move(w));
    }
    normalize_patterns(patterns);
    return patterns;
}

PartialWord expand_single_pattern(std::string_view text, const Alphabet& alphabet) {
    auto patterns = expand_patterns(text, alphabet);
    if (patterns.size() != 1) {
        syntax_error(text, "expected a single pattern, got " + std::to_string(patterns.size()));
    }
    return patterns.front();
}

PeriodicPartialWord parse_periodic(std::string_view text, const Alphabet& alphabet) {
    std::string_view s = trim(text);
    std::size_t open = s.find('(');
    std::vector<PartialWord> prefix;
    std::vector<PartialWord> cycle;
    if (open == std::string_view::npos) {
        if (s.find(')') != std::string_view::npos) syntax_error(text, "unmatched ')'");
        prefix.push_back(expand_single_pattern(s, alphabet));
    } else {
        if (s.back() != ')' || s.find('(', open + 1) != std::string_view::npos) {
            syntax_error(text, "cycle must be a single trailing '(...)'");
        }
        std::string_view head = trim(s.substr(0, open));
        std::string_view body = s.substr(open + 1, s.size() - open - 2);
        if (!head.empty()) prefix.push_back(expand_single_pattern(head, alphabet));
        cycle.push_back(expand_single_pattern(body, alphabet));
    }
    return PeriodicPartialWord(std::move(prefix), std::move(cycle));
}

} // namespace sqavoid
