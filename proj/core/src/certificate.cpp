#include "sqavoid/certificate.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "sqavoid/errors.hpp"
#include "sqavoid/pattern_syntax.hpp"

namespace sqavoid {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto valid = [](const std::string& part) {
        std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        return i < part.size() && std::all_of(part.begin() + static_cast<std::ptrdiff_t>(i), part.end(),
                                              [](char c) { return c >= '0' && c <= '9'; });
    };
    std::size_t slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid(num) || !valid(den) || den[0] == '-' || den[0] == '+') {
        throw ValidationError("malformed rational '" + s + "'");
    }
    BigInt n(num[0] == '+' ? num.substr(1) : num), d(den);
    if (d == 0) throw ValidationError("zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_decimal(const Rational& q, int digits) {
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    BigInt num = q.get_num();
    bool negative = num < 0;
    if (negative) num = -num;
    BigInt scaled = num * scale / q.get_den();
    std::string s = scaled.get_str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    if (digits > 0) s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    return (negative && scaled != 0 ? "-" : "") + s;
}

std::vector<std::size_t> Certificate::lengths() const {
    std::vector<std::size_t> out;
    for (const auto& w : patterns) out.push_back(w.size());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::uint64_t Certificate::f(std::size_t length) const {
    auto it = thresholds.find(length);
    if (it == thresholds.end()) throw ValidationError("length " + std::to_string(length) + " has no f value");
    return it->second;
}

const Rational& Certificate::x(std::size_t length) const {
    auto it = weights.find(length);
    if (it == weights.end()) throw ValidationError("length " + std::to_string(length) + " has no x value");
    return it->second;
}

void Certificate::validate() const {
    const Alphabet alphabet(alphabet_size);
    pattern_set().validate(alphabet);
    const auto ls = lengths();
    for (const auto& [len, value] : weights) {
        if (!std::binary_search(ls.begin(), ls.end(), len)) {
            throw ValidationError("x(" + std::to_string(len) + ") given for a length with no pattern");
        }
        if (value <= 0 || value >= 1) {
            throw ValidationError("x(" + std::to_string(len) + ") = " + to_string(value) + " is not in ]0,1[");
        }
    }
    for (std::size_t len : ls) {
        if (!weights.contains(len)) throw ValidationError("no x value for length " + std::to_string(len));
    }
}

PatternSet Certificate::pattern_set() const { return PatternSet{patterns, period_bound, thresholds}; }

std::uint64_t capped_power(std::uint64_t base, std::size_t exponent, std::uint64_t cap) {
    std::uint64_t value = 1;
    for (std::size_t e = 0; e < exponent; ++e) {
        if (value >= cap) return cap;
        if (base != 0 && value > cap / base) return cap;
        value *= base;
    }
    return std::min(value, cap);
}

namespace {

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));

BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

void require_length(const Certificate& cert, std::size_t len) {
    const auto ls = cert.lengths();
    if (!std::binary_search(ls.begin(), ls.end(), len)) {
        throw ValidationError("length " + std::to_string(len) + " does not occur in W");
    }
}

} // namespace

BigInt alpha(std::size_t len_u, std::size_t len_v, const Certificate& cert) {
    require_length(cert, len_u);
    require_length(cert, len_v);
    const std::uint64_t f = cert.f(len_v);
    const auto base = static_cast<std::uint64_t>(cert.alphabet_size - 1);
    BigInt total = 0;
    for (std::size_t m = 1; m <= len_u; ++m) {
        for (std::size_t j = 0; j <= (len_v - 1) / m; ++j) {
            total += big(capped_power(base, len_v - 1 - j * m, f));
        }
    }
    return total;
}

BigInt alpha_prime(std::size_t i, std::size_t len_v, const Certificate& cert) {
    require_length(cert, len_v);
    if (i < 1) throw ValidationError("alpha' needs i >= 1");
    const std::uint64_t f = cert.f(len_v);
    const auto base = static_cast<std::uint64_t>(cert.alphabet_size - 1);
    BigInt total = 0;
    for (std::size_t m = 0; m < i; ++m) total += big(capped_power(base, m, f));
    return total;
}

std::vector<Rational> beta_table(const Certificate& cert) {
    const auto ls = cert.lengths();
    std::vector<Rational> beta(cert.period_bound + 1, Rational(0));
    beta[0] = 1;
    for (std::size_t j = 1; j <= cert.period_bound; ++j) {
        for (std::size_t len : ls) {
            if (len > j) break;
            Rational candidate = cert.x(len) * beta[j - len];
            if (candidate > beta[j]) beta[j] = candidate;
        }
    }
    return beta;
}

CheckReport check_certificate(const Certificate& cert) {
    cert.validate();
    const auto ls = cert.lengths();
    const auto beta = beta_table(cert);
    const auto p = static_cast<long long>(cert.period_bound);

    CheckReport report;
    report.pass = true;
    bool first = true;
    for (std::size_t lw : ls) {
        LengthVerdict verdict;
        verdict.length = lw;
        verdict.pattern_count = static_cast<std::size_t>(std::count_if(
            cert.patterns.begin(), cert.patterns.end(), [&](const PartialWord& w) { return w.size() == lw; }));

        // max over u of alpha(|u|,|w|) / (1 - x_|u|) does not depend on v or r,
        // but the witness needs |u|, so the full triple loop is kept.
        std::vector<Rational> tail(ls.size());
        for (std::size_t iu = 0; iu < ls.size(); ++iu) {
            tail[iu] = Rational(alpha(ls[iu], lw, cert)) / (1 - cert.x(ls[iu]));
        }
        bool have_max = false;
        for (std::size_t iu = 0; iu < ls.size(); ++iu) {
            for (std::size_t lv : ls) {
                for (std::size_t r = 1; r <= lv; ++r) {
                    long long index = static_cast<long long>(r) + p - static_cast<long long>(lw) -
                                      static_cast<long long>(lv);
                    if (index < 0 || index > p) {
                        throw Error("beta index " + std::to_string(index) + " outside [0, p]");
                    }
                    Rational term = beta[static_cast<std::size_t>(index)] *
                                    (Rational(alpha_prime(r, lw, cert)) + cert.x(lv) * tail[iu]);
                    if (!have_max || term > verdict.max_term) {
                        verdict.max_term = term;
                        verdict.witness_u = ls[iu];
                        verdict.witness_v = lv;
                        verdict.witness_r = r;
                        have_max = true;
                    }
                }
            }
        }
        verdict.slack = Rational(big(cert.f(lw))) - verdict.max_term - 1 / cert.x(lw);
        verdict.pass = verdict.slack >= 0;
        report.pass = report.pass && verdict.pass;
        if (first || verdict.slack < report.worst_slack) {
            report.worst_slack = verdict.slack;
            report.worst_length = lw;
            first = false;
        }
        report.per_length.push_back(std::move(verdict));
    }
    return report;
}

SingletonReport check_singleton(std::uint64_t threshold, std::size_t len_w, std::size_t p, const Rational& x) {
    if (threshold < 1) throw ValidationError("threshold C must be positive");
    if (len_w < 1) throw ValidationError("|w| must be positive");
    if (p < 2 * len_w) throw ValidationError("p must be at least 2|w|");
    if (p % len_w != 0) throw ValidationError("|w| must divide p");
    if (x <= 0 || x >= 1) throw ValidationError("x must lie in ]0,1[");

    Rational power = 1;
    for (std::size_t e = 0; e < p / len_w - 1; ++e) power *= x;
    const Rational len_sq(big(len_w * len_w));
    SingletonReport report;
    report.lhs = Rational(big(threshold)) * (1 - power * len_sq / (1 - x));
    report.rhs = 1 / x;
    report.slack = report.lhs - report.rhs;
    report.pass = report.slack >= 0;
    return report;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_int(std::string_view s, std::size_t line, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
    }
    return value;
}

} // namespace

Certificate parse_certificate(std::istream& in) {
    Certificate cert;
    std::string raw;
    std::size_t lineno = 0;
    bool seen_magic = false, seen_k = false, seen_p = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (!seen_magic) {
            if (line != "CERT v1") throw ParseError(lineno, "expected 'CERT v1'");
            seen_magic = true;
            continue;
        }
        if (line.substr(0, 2) == "k=") {
            if (seen_k) throw ParseError(lineno, "duplicate k");
            cert.alphabet_size = parse_int<int>(line.substr(2), lineno, "alphabet size");
            if (cert.alphabet_size < 2 || cert.alphabet_size > kMaxAlphabetSize) {
                throw ParseError(lineno, "alphabet size out of range");
            }
            seen_k = true;
        } else if (line.substr(0, 2) == "p=") {
            if (seen_p) throw ParseError(lineno, "duplicate p");
            cert.period_bound = parse_int<std::size_t>(line.substr(2), lineno, "period bound");
            seen_p = true;
        } else if (line.substr(0, 8) == "pattern ") {
            if (!seen_k) throw ParseError(lineno, "k must be given before patterns");
            try {
                auto expanded = expand_patterns(line.substr(8), Alphabet(cert.alphabet_size));
                cert.patterns.insert(cert.patterns.end(), expanded.begin(), expanded.end());
            } catch (const ValidationError& e) {
                throw ParseError(lineno, e.what());
            }
        } else if (line.substr(0, 2) == "f " || line.substr(0, 2) == "x ") {
            std::string_view rest = trim(line.substr(2));
            std::size_t sp = rest.find(' ');
            if (sp == std::string_view::npos) throw ParseError(lineno, "expected '<len> <value>'");
            auto len = parse_int<std::size_t>(rest.substr(0, sp), lineno, "length");
            std::string_view value = trim(rest.substr(sp + 1));
            if (line[0] == 'f') {
                if (!cert.thresholds.emplace(len, parse_int<std::uint64_t>(value, lineno, "f value")).second) {
                    throw ParseError(lineno, "duplicate f(" + std::to_string(len) + ")");
                }
            } else {
                Rational q;
                try {
                    q = parse_rational(value);
                } catch (const ValidationError& e) {
                    throw ParseError(lineno, e.what());
                }
                if (!cert.weights.emplace(len, q).second) {
                    throw ParseError(lineno, "duplicate x(" + std::to_string(len) + ")");
                }
            }
        } else {
            throw ParseError(lineno, "unrecognised line '" + std::string(line) + "'");
        }
    }
    if (!seen_magic) throw ParseError(0, "empty certificate");
    if (!seen_k) throw ParseError(0, "missing k=");
    if (!seen_p) throw ParseError(0, "missing p=");
    normalize_patterns(cert.patterns);
    return cert;
}

void write_certificate(std::ostream& out, const Certificate& cert) {
    out << "CERT v1\n"
        << "k=" << cert.alphabet_size << '\n'
        << "p=" << cert.period_bound << '\n';
    for (const auto& w : cert.patterns) out << "pattern " << w.to_string() << '\n';
    for (const auto& [len, f] : cert.thresholds) out << "f " << len << ' ' << f << '\n';
    for (const auto& [len, x] : cert.weights) out << "x " << len << ' ' << x.get_num() << '/' << x.get_den() << '\n';
}

} // namespace sqavoid
