#include "sqavoid/rauzy.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <deque>
#include <functional>
#include <future>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>

#include "sqavoid/errors.hpp"

namespace sqavoid {

std::string to_string(GraphMode mode) {
    switch (mode) {
    case GraphMode::Full: return "full";
    case GraphMode::Exhaustive: return "exhaustive";
    case GraphMode::Reachable: return "reachable";
    }
    return "?";
}

GraphMode parse_graph_mode(std::string_view text) {
    if (text == "full") return GraphMode::Full;
    if (text == "exhaustive") return GraphMode::Exhaustive;
    if (text == "reachable") return GraphMode::Reachable;
    throw ValidationError("unknown graph mode '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// LabeledGraph

namespace {

std::size_t hash_word(WordView w) noexcept {
    std::string_view bytes(reinterpret_cast<const char*>(w.data()), w.size());
    return std::hash<std::string_view>{}(bytes);
}

} // namespace

LabeledGraph::LabeledGraph(int alphabet_size) : k_(alphabet_size) {
    if (alphabet_size < 2 || alphabet_size > kMaxAlphabetSize) {
        throw ValidationError("alphabet size out of range: " + std::to_string(alphabet_size));
    }
}

std::size_t LabeledGraph::probe(WordView word) const {
    const std::size_t mask = index_.size() - 1;
    std::size_t slot = hash_word(word) & mask;
    while (true) {
        VertexId v = index_[slot];
        if (v == kNoVertex) return slot;
        WordView stored = this->word(v);
        if (std::equal(stored.begin(), stored.end(), word.begin(), word.end())) return slot;
        slot = (slot + 1) & mask;
    }
}

void LabeledGraph::grow_index() {
    std::size_t capacity = std::max<std::size_t>(16, index_.size() * 2);
    index_.assign(capacity, kNoVertex);
    for (VertexId v = 0; v < vertex_count(); ++v) index_[probe(word(v))] = v;
}

VertexId LabeledGraph::add_vertex(WordView word) {
    if (2 * (vertex_count() + 1) > index_.size()) grow_index();
    std::size_t slot = probe(word);
    if (index_[slot] != kNoVertex) return index_[slot];
    if (vertex_count() >= kNoVertex - 1) throw BudgetExceeded("vertex id space exhausted");
    for (Letter a : word) {
        if (static_cast<int>(a) >= k_) throw ValidationError("vertex word uses a letter outside the alphabet");
    }
    auto id = static_cast<VertexId>(vertex_count());
    letters_.insert(letters_.end(), word.begin(), word.end());
    offsets_.push_back(letters_.size());
    succ_.insert(succ_.end(), static_cast<std::size_t>(k_), kNoVertex);
    index_[slot] = id;
    return id;
}

void LabeledGraph::add_arc(VertexId source, VertexId target, Letter label) {
    if (source >= vertex_count() || target >= vertex_count()) throw ValidationError("arc endpoint out of range");
    if (static_cast<int>(label) >= k_) throw ValidationError("arc label outside the alphabet");
    VertexId& slot = succ_[std::size_t{source} * k_ + label];
    if (slot != kNoVertex) {
        throw ValidationError("vertex " + std::to_string(source) + " already has an arc labelled " +
                              std::string(1, letter_to_char(label)));
    }
    slot = target;
    ++arc_count_;
}

std::size_t LabeledGraph::out_degree(VertexId v) const noexcept {
    auto first = succ_.begin() + static_cast<std::ptrdiff_t>(std::size_t{v} * k_);
    return static_cast<std::size_t>(std::count_if(first, first + k_, [](VertexId t) { return t != kNoVertex; }));
}

std::optional<VertexId> LabeledGraph::find(WordView word) const {
    if (index_.empty()) return std::nullopt;
    VertexId v = index_[probe(word)];
    if (v == kNoVertex) return std::nullopt;
    return v;
}

std::vector<Arc> LabeledGraph::arcs() const {
    std::vector<Arc> out;
    out.reserve(arc_count_);
    for (VertexId v = 0; v < vertex_count(); ++v) {
        for (int a = 0; a < k_; ++a) {
            VertexId t = successor(v, static_cast<Letter>(a));
            if (t != kNoVertex) out.push_back({v, t, static_cast<Letter>(a)});
        }
    }
    return out;
}

void LabeledGraph::canonicalize() {
    const std::size_t n = vertex_count();
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), VertexId{0});
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        WordView wa = word(a), wb = word(b);
        return std::lexicographical_compare(wa.begin(), wa.end(), wb.begin(), wb.end());
    });
    std::vector<VertexId> new_id(n);
    for (std::size_t i = 0; i < n; ++i) new_id[order[i]] = static_cast<VertexId>(i);

    std::vector<Letter> letters;
    letters.reserve(letters_.size());
    std::vector<std::uint64_t> offsets{0};
    offsets.reserve(n + 1);
    std::vector<VertexId> succ(succ_.size(), kNoVertex);
    for (std::size_t i = 0; i < n; ++i) {
        VertexId old = order[i];
        WordView w = word(old);
        letters.insert(letters.end(), w.begin(), w.end());
        offsets.push_back(letters.size());
        for (int a = 0; a < k_; ++a) {
            VertexId t = successor(old, static_cast<Letter>(a));
            succ[i * k_ + a] = t == kNoVertex ? kNoVertex : new_id[t];
        }
    }
    letters_ = std::move(letters);
    offsets_ = std::move(offsets);
    succ_ = std::move(succ);
    index_.assign(index_.size(), kNoVertex);
    for (VertexId v = 0; v < n; ++v) index_[probe(word(v))] = v;
}

std::size_t LabeledGraph::memory_bytes() const noexcept {
    return letters_.capacity() * sizeof(Letter) + offsets_.capacity() * sizeof(std::uint64_t) +
           succ_.capacity() * sizeof(VertexId) + index_.capacity() * sizeof(VertexId);
}

bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
    return a.k_ == b.k_ && a.letters_ == b.letters_ && a.offsets_ == b.offsets_ && a.succ_ == b.succ_;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

void require_period_bound(std::size_t p) {
    if (p < 2) throw ValidationError("period bound p must be at least 2, got " + std::to_string(p));
}

// Does w[0..len) have period i (w[j] == w[j-i] for all i <= j < len)?
bool has_period(WordView w, std::size_t i) {
    return std::equal(w.begin() + static_cast<std::ptrdiff_t>(i), w.end(), w.begin());
}

} // namespace

LabeledGraph build_full_rauzy(const Alphabet& alphabet, std::size_t p, std::size_t max_vertices) {
    require_period_bound(p);
    const std::size_t n = 2 * p - 3;
    const int k = alphabet.size();
    LabeledGraph g(k);

    Word buf;
    buf.reserve(n);
    auto extend = [&](auto&& self) -> void {
        if (buf.size() == n) {
            if (g.vertex_count() >= max_vertices) {
                throw BudgetExceeded("full Rauzy graph exceeds " + std::to_string(max_vertices) + " vertices");
            }
            g.add_vertex(buf);
            return;
        }
        for (int a = 0; a < k; ++a) {
            buf.push_back(static_cast<Letter>(a));
            if (square_suffix_period(buf) == 0) self(self);
            buf.pop_back();
        }
    };
    extend(extend);
    g.canonicalize();

    Word ext;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (int b = 0; b < k; ++b) {
            WordView w = g.word(v);
            ext.assign(w.begin(), w.end());
            ext.push_back(static_cast<Letter>(b));
            if (square_suffix_period(ext) != 0) continue;
            auto target = g.find(WordView(ext).subspan(1));
            if (!target) throw Error("full Rauzy graph: shifted word missing, enumeration is inconsistent");
            g.add_arc(v, *target, static_cast<Letter>(b));
        }
    }
    return g;
}

bool psi_condition(WordView w, std::size_t len, std::size_t p) {
    WordView s = w.subspan(w.size() - len);
    const std::size_t lo = (len + 1) / 2 + 1;
    // Descending so the cheap failure (i >= len: empty mismatch range) is hit first.
    for (std::size_t i = p - 1; i >= lo && i >= 1; --i) {
        if (i >= len) return false;
        if (has_period(s, i)) return false;
    }
    return true;
}

std::size_t psi_length(WordView w, std::size_t p) {
    for (std::size_t len = 1; len <= w.size(); ++len) {
        if (psi_condition(w, len, p)) return len;
    }
    return 0;
}

Word psi(WordView w, std::size_t p) {
    require_period_bound(p);
    std::size_t len = psi_length(w, p);
    if (len == 0) throw ValidationError("word " + to_string(w) + " is not Psi-reducible for p=" + std::to_string(p));
    return Word(w.end() - static_cast<std::ptrdiff_t>(len), w.end());
}

std::optional<Word> psi_step(WordView state, Letter letter, std::size_t p) {
    require_period_bound(p);
    Word ext(state.begin(), state.end());
    ext.push_back(letter);
    if (square_suffix_period(ext, p) != 0) return std::nullopt;
    std::size_t len = psi_length(ext, p);
    if (len == 0) throw ValidationError("invalid Psi state " + to_string(state) + " for p=" + std::to_string(p));
    return Word(ext.end() - static_cast<std::ptrdiff_t>(len), ext.end());
}

namespace {

struct EnumerationShared {
    std::size_t max_vertices;
    std::atomic<std::size_t> found{0};
    std::atomic<std::size_t> nodes{0};
};

// Exhaustive enumeration of Psi images. Words are grown to the left; `rev`
// holds the current word reversed so growth is a push_back. Prefix squares of
// the word are suffix squares of `rev`, and periods are reversal invariant, so
// both tests run directly on `rev`. The first node of a branch that satisfies
// the Psi condition is the shortest qualifying suffix of everything below it,
// so the branch stops there.
class PsiEnumerator {
public:
    PsiEnumerator(int k, std::size_t p, EnumerationShared& shared)
        : k_(k), p_(p), n_(2 * p - 3), shared_(shared) {}

    std::vector<Word> run(Letter first) {
        rev_.clear();
        rev_.push_back(first);
        visit();
        return std::move(found_);
    }

private:
    void visit() {
        shared_.nodes.fetch_add(1, std::memory_order_relaxed);
        if (psi_condition(rev_, rev_.size(), p_)) {
            if (left_extendable()) {
                if (shared_.found.fetch_add(1, std::memory_order_relaxed) + 1 > shared_.max_vertices) {
                    throw BudgetExceeded("Psi graph exceeds " + std::to_string(shared_.max_vertices) +
                                         " vertices (" + std::to_string(shared_.nodes.load()) +
                                         " search nodes visited)");
                }
                found_.emplace_back(rev_.rbegin(), rev_.rend());
            }
            return;
        }
        if (rev_.size() >= n_) return;
        for (int a = 0; a < k_; ++a) {
            rev_.push_back(static_cast<Letter>(a));
            if (square_suffix_period(rev_) == 0) visit();
            rev_.pop_back();
        }
    }

    // Is the current word a suffix of some square-free word of length 2p-3?
    bool left_extendable() {
        Word probe = rev_;
        auto go = [&](auto&& self) -> bool {
            if (probe.size() >= n_) return true;
            for (int a = 0; a < k_; ++a) {
                probe.push_back(static_cast<Letter>(a));
                bool ok = square_suffix_period(probe) == 0 && self(self);
                probe.pop_back();
                if (ok) return true;
            }
            return false;
        };
        return go(go);
    }

    int k_;
    std::size_t p_;
    std::size_t n_;
    EnumerationShared& shared_;
    Word rev_;
    std::vector<Word> found_;
};

void attach_psi_arcs(LabeledGraph& g, std::size_t p) {
    const int k = g.alphabet_size();
    Word state;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        WordView w = g.word(v);
        state.assign(w.begin(), w.end());
        for (int a = 0; a < k; ++a) {
            auto next = psi_step(state, static_cast<Letter>(a), p);
            if (!next) continue;
            auto target = g.find(*next);
            if (!target) {
                // Only possible for an incomplete vertex set, which callers close beforehand.
                throw Error("Psi successor " + to_string(*next) + " of " + to_string(state) + " is not a vertex");
            }
            g.add_arc(v, *target, static_cast<Letter>(a));
        }
    }
}

LabeledGraph build_exhaustive(const Alphabet& alphabet, std::size_t p, const BuildOptions& options) {
    const int k = alphabet.size();
    EnumerationShared shared{options.max_vertices};
    std::vector<std::vector<Word>> parts(static_cast<std::size_t>(k));
    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1) {
        for (int a = 0; a < k; ++a) parts[a] = PsiEnumerator(k, p, shared).run(static_cast<Letter>(a));
    } else {
        // One task per last letter; tasks are drained in batches of `threads`.
        for (int base = 0; base < k; base += static_cast<int>(threads)) {
            std::vector<std::future<std::vector<Word>>> tasks;
            for (int a = base; a < std::min(k, base + static_cast<int>(threads)); ++a) {
                tasks.push_back(std::async(std::launch::async, [&, a] {
                    return PsiEnumerator(k, p, shared).run(static_cast<Letter>(a));
                }));
            }
            for (std::size_t i = 0; i < tasks.size(); ++i) parts[base + i] = tasks[i].get();
        }
    }
    LabeledGraph g(k);
    for (const auto& part : parts) {
        for (const auto& w : part) g.add_vertex(w);
    }
    g.canonicalize();
    attach_psi_arcs(g, p);
    return g;
}

// Deterministic greedy square-free word of length n starting with `first`;
// letters are tried in the order rotated by `rotation`.
std::optional<Word> greedy_square_free(int k, std::size_t n, Letter first, int rotation) {
    Word buf{first};
    auto go = [&](auto&& self) -> bool {
        if (buf.size() >= n) return true;
        for (int i = 0; i < k; ++i) {
            buf.push_back(static_cast<Letter>((i + rotation) % k));
            if (square_suffix_period(buf) == 0 && self(self)) return true;
            buf.pop_back();
        }
        return false;
    };
    if (!go(go)) return std::nullopt;
    return buf;
}

LabeledGraph build_reachable(const Alphabet& alphabet, std::size_t p, const BuildOptions& options) {
    const int k = alphabet.size();
    const std::size_t n = 2 * p - 3;
    const std::size_t seeds = options.seeds == 0 ? static_cast<std::size_t>(k) : options.seeds;
    LabeledGraph g(k);
    std::deque<VertexId> queue;
    auto add = [&](const Word& w) {
        std::size_t before = g.vertex_count();
        VertexId v = g.add_vertex(w);
        if (g.vertex_count() > before) {
            if (g.vertex_count() > options.max_vertices) {
                throw BudgetExceeded("reachable Psi graph exceeds " + std::to_string(options.max_vertices) +
                                     " vertices (" + std::to_string(queue.size()) + " states still queued)");
            }
            queue.push_back(v);
        }
    };
    for (std::size_t s = 0; s < seeds; ++s) {
        auto seed = greedy_square_free(k, n, static_cast<Letter>(s % k), static_cast<int>((s / k) % k));
        if (seed) add(psi(*seed, p));
    }
    Word state;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        WordView w = g.word(v);
        state.assign(w.begin(), w.end());
        for (int a = 0; a < k; ++a) {
            if (auto next = psi_step(state, static_cast<Letter>(a), p)) add(*next);
        }
    }
    g.canonicalize();
    attach_psi_arcs(g, p);
    return g;
}

} // namespace

LabeledGraph build_psi_graph(const Alphabet& alphabet, std::size_t p, const BuildOptions& options) {
    require_period_bound(p);
    switch (options.mode) {
    case GraphMode::Exhaustive: return build_exhaustive(alphabet, p, options);
    case GraphMode::Reachable: return build_reachable(alphabet, p, options);
    case GraphMode::Full: break;
    }
    throw ValidationError("build_psi_graph needs mode exhaustive or reachable");
}

// ---------------------------------------------------------------------------
// Serialization

std::string graph_header(const LabeledGraph& g, const GraphMeta& meta) {
    std::ostringstream s;
    s << "RAUZY v1 k=" << meta.alphabet_size << " p=" << meta.period_bound << " mode=" << to_string(meta.mode)
      << " |V|=" << g.vertex_count() << " |A|=" << g.arc_count();
    return s.str();
}

void serialize_graph(std::ostream& out, const LabeledGraph& g, const GraphMeta& meta) {
    if (meta.alphabet_size != g.alphabet_size()) throw ValidationError("graph metadata disagrees with the graph");
    out << graph_header(g, meta) << '\n';
    for (VertexId v = 0; v < g.vertex_count(); ++v) out << to_string(g.word(v)) << '\n';
    for (const Arc& a : g.arcs()) out << a.source << ' ' << a.target << ' ' << letter_to_char(a.label) << '\n';
}

namespace {

template <typename T>
bool parse_number(std::string_view s, T& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t sp = line.find(' ', start);
        if (sp == std::string_view::npos) sp = line.size();
        parts.push_back(line.substr(start, sp - start));
        start = sp + 1;
    }
    return parts;
}

// Reads `key=value` where value is numeric.
template <typename T>
T keyed_number(std::string_view field, std::string_view key, std::size_t line) {
    T value{};
    if (field.substr(0, key.size()) != key || !parse_number(field.substr(key.size()), value)) {
        throw ParseError(line, "expected " + std::string(key) + "<int>, got '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

LoadedGraph deserialize_graph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(lineno + 1, std::string("unexpected end of input, expected ") + what);
        ++lineno;
        if (!line.empty() && line.back() == '\r') throw ParseError(lineno, "CRLF line ending");
    };

    next_line("header");
    auto fields = split_spaces(line);
    if (fields.size() != 7 || fields[0] != "RAUZY" || fields[1] != "v1") {
        throw ParseError(lineno, "bad header, expected 'RAUZY v1 k=.. p=.. mode=.. |V|=.. |A|=..'");
    }
    GraphMeta meta;
    meta.alphabet_size = keyed_number<int>(fields[2], "k=", lineno);
    meta.period_bound = keyed_number<std::size_t>(fields[3], "p=", lineno);
    if (fields[4].substr(0, 5) != "mode=") throw ParseError(lineno, "expected mode=<...>");
    try {
        meta.mode = parse_graph_mode(fields[4].substr(5));
    } catch (const ValidationError& e) {
        throw ParseError(lineno, e.what());
    }
    const auto nv = keyed_number<std::size_t>(fields[5], "|V|=", lineno);
    const auto na = keyed_number<std::size_t>(fields[6], "|A|=", lineno);
    if (meta.alphabet_size < 2 || meta.alphabet_size > kMaxAlphabetSize) throw ParseError(lineno, "k out of range");
    if (meta.period_bound < 2) throw ParseError(lineno, "p must be at least 2");

    const Alphabet alphabet(meta.alphabet_size);
    LabeledGraph g(meta.alphabet_size);
    for (std::size_t i = 0; i < nv; ++i) {
        next_line("vertex word");
        Word w;
        try {
            w = parse_word(line, alphabet);
        } catch (const ValidationError& e) {
            throw ParseError(lineno, e.what());
        }
        if (w.empty()) throw ParseError(lineno, "empty vertex word");
        if (g.add_vertex(w) != i) throw ParseError(lineno, "duplicate vertex " + line);
    }
    for (std::size_t i = 0; i < na; ++i) {
        next_line("arc");
        auto parts = split_spaces(line);
        VertexId src = 0, dst = 0;
        if (parts.size() != 3 || !parse_number(parts[0], src) || !parse_number(parts[1], dst) || parts[2].size() != 1) {
            throw ParseError(lineno, "expected 'src dst label', got '" + line + "'");
        }
        if (src >= nv || dst >= nv) throw ParseError(lineno, "arc endpoint out of range");
        Letter label{};
        try {
            label = char_to_symbol(parts[2][0]);
        } catch (const ValidationError& e) {
            throw ParseError(lineno, e.what());
        }
        if (label == kHole || !alphabet.contains(label)) throw ParseError(lineno, "arc label outside the alphabet");
        try {
            g.add_arc(src, dst, label);
        } catch (const ValidationError& e) {
            throw ParseError(lineno, e.what());
        }
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty()) throw ParseError(lineno, "content after the declared |V| + |A| lines");
    }
    return {std::move(g), meta};
}

} // namespace sqavoid
