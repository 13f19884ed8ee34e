#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <new>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "sqavoid/certificate.hpp"
#include "sqavoid/errors.hpp"
#include "sqavoid/pattern_syntax.hpp"
#include "sqavoid/prune.hpp"
#include "sqavoid/rauzy.hpp"
#include "sqavoid/search.hpp"
#include "sqavoid/words.hpp"

#ifndef SQAVOID_CONFIG_DIR
#define SQAVOID_CONFIG_DIR "configs"
#endif

namespace sqavoid::cli {
namespace {

namespace fs = std::filesystem;

// Where a certificate (or just W, f, p for pruning) comes from. Flags win over
// the file.
struct CertSource {
    std::string path;
    std::string preset;
    std::string scale = "desk";
    std::string config_dir = default_config_dir();
    int k = 0;
    std::size_t p = 0;
    std::vector<std::string> patterns;
    std::vector<std::string> f;
    std::vector<std::string> x;

    void add_options(CLI::App& app) {
        app.add_option("--cert", path, "Certificate file");
        app.add_option("--preset", preset, "Shipped certificate: six, quaternary or ternary");
        app.add_option("--scale", scale, "Preset scale")->check(CLI::IsMember({"paper", "desk"}));
        app.add_option("--config-dir", config_dir, "Directory with paper/ and desk/ presets");
        app.add_option("--k", k, "Alphabet size");
        app.add_option("--p", p, "Period bound: squares of period < p are excluded");
        app.add_option("--pattern", patterns, "Pattern shorthand, repeatable; replaces the file's W");
        app.add_option("--f", f, "Threshold override <len>=<int>, repeatable");
        app.add_option("--x", x, "Weight override <len>=<num>/<den>, repeatable");
    }
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    return out;
}

std::pair<std::size_t, std::string> split_assignment(const std::string& text, const char* flag) {
    auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ValidationError(std::string(flag) + " expects <len>=<value>, got '" + text + "'");
    }
    std::size_t len = 0;
    try {
        std::size_t used = 0;
        len = std::stoul(text.substr(0, eq), &used);
        if (used != eq) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
        throw ValidationError(std::string(flag) + ": bad length in '" + text + "'");
    }
    return {len, text.substr(eq + 1)};
}

Certificate load_certificate(const CertSource& src) {
    Certificate cert;
    bool from_file = false;
    if (!src.path.empty() && !src.preset.empty()) throw ValidationError("give --cert or --preset, not both");
    std::string path = src.path;
    if (!src.preset.empty()) path = (fs::path(src.config_dir) / src.scale / (src.preset + ".cert")).string();
    if (!path.empty()) {
        auto in = open_input(path);
        cert = parse_certificate(in);
        from_file = true;
    }
    if (src.k != 0) {
        if (from_file && src.k != cert.alphabet_size) {
            throw ValidationError("--k=" + std::to_string(src.k) + " conflicts with the certificate's k=" +
                                  std::to_string(cert.alphabet_size));
        }
        cert.alphabet_size = src.k;
    }
    if (cert.alphabet_size == 0) throw ValidationError("no alphabet size: give --k, --cert or --preset");
    const Alphabet alphabet(cert.alphabet_size);
    if (src.p != 0) cert.period_bound = src.p;
    if (!src.patterns.empty()) {
        cert.patterns.clear();
        for (const auto& text : src.patterns) {
            auto expanded = expand_patterns(text, alphabet);
            cert.patterns.insert(cert.patterns.end(), expanded.begin(), expanded.end());
        }
        normalize_patterns(cert.patterns);
        // Keep f and x only on lengths that still occur.
        std::set<std::size_t> lengths;
        for (const auto& w : cert.patterns) lengths.insert(w.size());
        std::erase_if(cert.thresholds, [&](const auto& kv) { return !lengths.count(kv.first); });
        std::erase_if(cert.weights, [&](const auto& kv) { return !lengths.count(kv.first); });
    }
    for (const auto& item : src.f) {
        auto [len, value] = split_assignment(item, "--f");
        try {
            std::size_t used = 0;
            cert.thresholds[len] = std::stoull(value, &used);
            if (used != value.size()) throw std::invalid_argument("trailing");
        } catch (const std::logic_error&) {
            throw ValidationError("--f: bad threshold in '" + item + "'");
        }
    }
    for (const auto& item : src.x) {
        auto [len, value] = split_assignment(item, "--x");
        cert.weights[len] = parse_rational(value);
    }
    return cert;
}

std::string join_lengths(const std::vector<std::size_t>& lengths) {
    std::string s;
    for (auto l : lengths) s += (s.empty() ? "" : ",") + std::to_string(l);
    return s;
}

void print_patterns(std::ostream& out, const Certificate& cert) {
    out << "W (" << cert.patterns.size() << " patterns):";
    for (const auto& w : cert.patterns) out << ' ' << w.to_string();
    out << '\n';
}

std::string verdict_word(bool pass) { return pass ? "PASS" : "FAIL"; }

void print_check_report(std::ostream& out, const Certificate& cert, const CheckReport& report) {
    for (const auto& v : report.per_length) {
        out << "length " << v.length << ": patterns=" << v.pattern_count << " f=" << cert.f(v.length)
            << " x=" << to_string(cert.x(v.length)) << " max=" << to_string(v.max_term) << " slack=" << to_string(v.slack)
            << " (~" << to_decimal(v.slack) << ") argmax(|u|,|v|,r)=(" << v.witness_u << ',' << v.witness_v << ','
            << v.witness_r << ") " << verdict_word(v.pass) << '\n';
    }
    out << "worst slack=" << to_string(report.worst_slack) << " (~" << to_decimal(report.worst_slack)
        << ") at length " << report.worst_length << '\n';
}

LoadedGraph load_graph(const std::string& path) {
    auto in = open_input(path);
    return deserialize_graph(in);
}

void print_graph_stats(std::ostream& out, const LabeledGraph& g, const GraphMeta& meta) {
    out << "graph: k=" << meta.alphabet_size << " p=" << meta.period_bound << " mode=" << to_string(meta.mode)
        << " |V|=" << g.vertex_count() << " |A|=" << g.arc_count() << " memory_bytes=" << g.memory_bytes() << '\n';
}

void require_same_parameters(const GraphMeta& meta, const Certificate& cert) {
    if (meta.alphabet_size != cert.alphabet_size || meta.period_bound != cert.period_bound) {
        throw ValidationError("graph has k=" + std::to_string(meta.alphabet_size) + " p=" +
                              std::to_string(meta.period_bound) + " but the certificate has k=" +
                              std::to_string(cert.alphabet_size) + " p=" + std::to_string(cert.period_bound));
    }
}

struct GraphFlags {
    std::string mode = "exhaustive";
    unsigned threads = 1;
    std::size_t max_nodes = BuildOptions{}.max_vertices;
    std::size_t seeds = 0;

    void add_options(CLI::App& app) {
        app.add_option("--mode", mode, "full, exhaustive or reachable")
            ->check(CLI::IsMember({"full", "exhaustive", "reachable"}));
        app.add_option("--threads", threads, "Worker threads for enumeration")->check(CLI::Range(1u, 256u));
        app.add_option("--max-nodes", max_nodes, "Vertex budget")->check(CLI::PositiveNumber);
        app.add_option("--seeds", seeds, "Greedy seeds for reachable mode (0 = k)");
    }

    LabeledGraph build(int k, std::size_t p) const {
        GraphMode m = parse_graph_mode(mode);
        if (m == GraphMode::Full) return build_full_rauzy(Alphabet(k), p, max_nodes);
        BuildOptions options;
        options.mode = m;
        options.max_vertices = max_nodes;
        options.seeds = seeds;
        options.threads = threads;
        return build_psi_graph(Alphabet(k), p, options);
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- subcommands -----------------------------------------------------------

int cmd_build_graph(int k, std::size_t p, const GraphFlags& flags, const std::string& out_path, std::ostream& out) {
    if (p < 2) throw ValidationError("p must be at least 2");
    const Alphabet alphabet(k);
    auto t0 = std::chrono::steady_clock::now();
    LabeledGraph g = flags.build(alphabet.size(), p);
    GraphMeta meta{k, p, parse_graph_mode(flags.mode)};
    print_graph_stats(out, g, meta);
    out << "seconds=" << seconds_since(t0) << '\n';
    if (!out_path.empty()) {
        auto file = open_output(out_path);
        serialize_graph(file, g, meta);
        out << "wrote " << out_path << '\n';
    }
    return kExitOk;
}

int cmd_prune(const std::string& graph_path, CertSource src, const std::string& out_path, std::ostream& out) {
    auto loaded = load_graph(graph_path);
    // W and f given as flags only: take k from the graph.
    if (src.path.empty() && src.preset.empty() && src.k == 0) src.k = loaded.meta.alphabet_size;
    Certificate cert = load_certificate(src);
    if (src.p == 0 && cert.period_bound == 0) cert.period_bound = loaded.meta.period_bound;
    require_same_parameters(loaded.meta, cert);
    PatternSet ps = cert.pattern_set();
    ps.validate(Alphabet(cert.alphabet_size));
    print_patterns(out, cert);
    print_graph_stats(out, loaded.graph, loaded.meta);
    auto t0 = std::chrono::steady_clock::now();
    PrunedSubgraph pruned = prune_fixed_point(loaded.graph, ps);
    out << "prune: |X|=" << pruned.size() << " sweeps=" << pruned.sweeps << " removed=" << pruned.removed
        << " seconds=" << seconds_since(t0) << '\n';
    if (pruned.empty()) out << "X is empty: the method is inconclusive for these thresholds\n";
    if (!out_path.empty()) {
        auto file = open_output(out_path);
        write_pruned(file, pruned, graph_header(loaded.graph, loaded.meta));
        out << "wrote " << out_path << '\n';
    }
    return kExitOk;
}

int cmd_check_cert(const CertSource& src, std::ostream& out) {
    Certificate cert = load_certificate(src);
    CheckReport report = check_certificate(cert); // validates first
    out << "certificate: k=" << cert.alphabet_size << " p=" << cert.period_bound
        << " lengths=" << join_lengths(cert.lengths()) << '\n';
    print_patterns(out, cert);
    print_check_report(out, cert, report);
    out << "verdict: " << verdict_word(report.pass) << '\n';
    return report.pass ? kExitOk : kExitNegative;
}

int cmd_check_singleton(std::uint64_t c, std::size_t len, std::size_t p, const std::string& x_text, std::ostream& out) {
    SingletonReport r = check_singleton(c, len, p, parse_rational(x_text));
    out << "C=" << c << " |w|=" << len << " p=" << p << " x=" << x_text << '\n';
    out << "lhs=" << to_string(r.lhs) << " rhs=" << to_string(r.rhs) << " slack=" << to_string(r.slack) << " (~"
        << to_decimal(r.slack) << ")\n";
    out << "verdict: " << verdict_word(r.pass) << '\n';
    return r.pass ? kExitOk : kExitNegative;
}

struct LowerBoundPreset {
    int k;
    const char* mu;
};

const std::map<std::string, LowerBoundPreset>& lower_bound_presets() {
    static const std::map<std::string, LowerBoundPreset> presets{
        {"quaternary", {4, "(0.1.2.3.)"}},
        {"ternary", {3, "({0.^5}{1.^5}{2.^5})"}},
    };
    return presets;
}

int cmd_lower_bound(const std::string& preset, std::string mu_text, int k, const SearchBudget& budget,
                    std::ostream& out) {
    if (!preset.empty()) {
        auto it = lower_bound_presets().find(preset);
        if (it == lower_bound_presets().end()) throw ValidationError("unknown lower-bound preset '" + preset + "'");
        if (!mu_text.empty()) throw ValidationError("give --preset or --mu, not both");
        if (k != 0 && k != it->second.k) throw ValidationError("--k conflicts with the preset");
        k = it->second.k;
        mu_text = it->second.mu;
    }
    if (mu_text.empty()) throw ValidationError("lower-bound needs --mu or --preset");
    if (k == 0) throw ValidationError("lower-bound needs --k");
    const Alphabet alphabet(k);
    const PeriodicPartialWord mu = parse_periodic(mu_text, alphabet);
    auto t0 = std::chrono::steady_clock::now();
    SearchOutcome outcome = count_compatible_square_free(mu, alphabet, budget);
    out << "mu=" << mu.to_string() << " k=" << k << '\n';
    out << outcome.summary() << '\n';
    out << "witness=" << to_string(outcome.witness) << " seconds=" << seconds_since(t0) << '\n';
    if (outcome.status == SearchStatus::Exhausted) {
        out << "every square-free word compatible with mu has length <= " << outcome.max_depth << '\n';
        return kExitOk;
    }
    out << "search stopped at its budget: no conclusion\n";
    return kExitNegative;
}

void print_oracle(std::ostream& out, const OracleCheck& c, std::size_t rounds) {
    out << "k=" << c.alphabet_size << " p=" << c.period_bound
        << " image=" << (c.image_equal() ? "equal" : "DIFFERENT") << " missing_vertices=" << c.missing_vertices.size()
        << " extra_vertices=" << c.extra_vertices.size() << " missing_arcs=" << c.missing_arcs
        << " extra_arcs=" << c.extra_arcs << " walk_rounds=" << rounds << " walk_checks=" << c.walk_checks
        << " walk_mismatches=" << c.walk_mismatches << ' ' << verdict_word(c.pass()) << '\n';
    constexpr std::size_t kShow = 10;
    for (std::size_t i = 0; i < std::min(kShow, c.missing_vertices.size()); ++i) {
        out << "  - " << to_string(c.missing_vertices[i]) << '\n';
    }
    for (std::size_t i = 0; i < std::min(kShow, c.extra_vertices.size()); ++i) {
        out << "  + " << to_string(c.extra_vertices[i]) << '\n';
    }
}

int cmd_oracle_verify(const std::string& graph_path, int k, std::vector<std::size_t> ps, std::size_t rounds,
                      std::uint64_t seed, unsigned threads, std::ostream& out) {
    bool all = true;
    if (!graph_path.empty()) {
        auto loaded = load_graph(graph_path);
        if (!loaded.meta.compressed()) throw ValidationError("oracle-verify expects a compressed graph file");
        auto c = verify_psi_graph(loaded.graph, loaded.meta.period_bound, rounds, seed);
        print_oracle(out, c, rounds);
        all = c.pass();
    } else {
        std::vector<std::pair<int, std::size_t>> instances;
        if (k == 0 && ps.empty()) {
            instances = {{3, 3}, {3, 4}, {3, 5}, {3, 6}, {4, 3}, {4, 4}};
        } else {
            if (k == 0 || ps.empty()) throw ValidationError("oracle-verify needs both --k and --p, or neither");
            for (auto p : ps) instances.emplace_back(k, p);
        }
        for (auto [kk, p] : instances) {
            if (p < 3) throw ValidationError("oracle-verify needs p >= 3");
            BuildOptions options;
            options.threads = threads;
            LabeledGraph g = build_psi_graph(Alphabet(kk), p, options);
            auto c = verify_psi_graph(g, p, rounds, seed);
            print_oracle(out, c, rounds);
            all = all && c.pass();
        }
    }
    out << "verdict: " << verdict_word(all) << '\n';
    return all ? kExitOk : kExitNegative;
}

int cmd_prove(const CertSource& src, const std::string& graph_path, const GraphFlags& flags,
              const std::string& out_path, std::ostream& out) {
    Certificate cert = load_certificate(src);
    cert.validate();
    out << "certificate: k=" << cert.alphabet_size << " p=" << cert.period_bound
        << " lengths=" << join_lengths(cert.lengths()) << '\n';
    print_patterns(out, cert);

    std::optional<LoadedGraph> loaded;
    auto t0 = std::chrono::steady_clock::now();
    if (!graph_path.empty()) {
        loaded.emplace(load_graph(graph_path));
        require_same_parameters(loaded->meta, cert);
    } else {
        try {
            LabeledGraph g = flags.build(cert.alphabet_size, cert.period_bound);
            loaded.emplace(LoadedGraph{std::move(g), GraphMeta{cert.alphabet_size, cert.period_bound,
                                                              parse_graph_mode(flags.mode)}});
        } catch (const BudgetExceeded& e) {
            out << "graph: " << e.what() << " after " << seconds_since(t0) << " s\n";
            out << "status=budget_exceeded\n";
            out << "verdict: NOT PROVEN (graph construction stopped at its budget; nothing was established)\n";
            return kExitNegative;
        }
    }
    const LabeledGraph& g = loaded->graph;
    print_graph_stats(out, g, loaded->meta);
    out << "graph seconds=" << seconds_since(t0) << '\n';

    t0 = std::chrono::steady_clock::now();
    const PatternSet ps = cert.pattern_set();
    PrunedSubgraph pruned = prune_fixed_point(g, ps);
    out << "prune: |X|=" << pruned.size() << " sweeps=" << pruned.sweeps << " removed=" << pruned.removed
        << " seconds=" << seconds_since(t0) << '\n';
    if (!out_path.empty()) {
        auto file = open_output(out_path);
        write_pruned(file, pruned, graph_header(g, loaded->meta));
    }

    const std::vector<VertexId> x = pruned.vertices();
    const bool certified = certify_subgraph(g, x, ps);
    out << "subgraph check: " << verdict_word(certified) << '\n';

    CheckReport report = check_certificate(cert);
    print_check_report(out, cert, report);
    out << "certificate: " << verdict_word(report.pass) << '\n';

    out << "status=complete\n";
    if (pruned.empty()) {
        out << "verdict: NOT PROVEN (pruned subgraph empty)\n";
        return kExitNegative;
    }
    if (!certified) {
        out << "verdict: NOT PROVEN (pruned subgraph failed the independent walk-count check)\n";
        return kExitNegative;
    }
    if (!report.pass) {
        out << "verdict: NOT PROVEN (certificate inequality fails)\n";
        return kExitNegative;
    }
    out << "verdict: PROVEN\n";
    out << "established: for every mu in W^omega, infinitely many square-free words over " << cert.alphabet_size
        << " letters are compatible with mu\n";
    return kExitOk;
}

} // namespace

std::string default_config_dir() { return SQAVOID_CONFIG_DIR; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Square-free words compatible with partial words: graph pruning and exact certificates", "sqavoid"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    // build-graph
    auto* build = app.add_subcommand("build-graph", "Build R_p or its compressed image and serialize it");
    int build_k = 0;
    std::size_t build_p = 0;
    std::string build_out;
    GraphFlags build_flags;
    build->add_option("--k", build_k, "Alphabet size")->required();
    build->add_option("--p", build_p, "Period bound")->required();
    build->add_option("--out", build_out, "Output graph file");
    build_flags.add_options(*build);

    // prune
    auto* prune = app.add_subcommand("prune", "Greatest vertex subset keeping f(|w|) walks for every pattern");
    std::string prune_graph, prune_out;
    CertSource prune_src;
    prune->add_option("--graph", prune_graph, "Graph file")->required();
    prune->add_option("--out", prune_out, "Pruned subgraph file");
    prune_src.add_options(*prune);

    // check-cert
    auto* check = app.add_subcommand("check-cert", "Exact check of the certificate inequality system");
    CertSource check_src;
    check_src.add_options(*check);

    // check-singleton
    auto* single = app.add_subcommand("check-singleton", "Exact check of the single-pattern condition");
    std::uint64_t single_c = 0;
    std::size_t single_len = 0, single_p = 0;
    std::string single_x;
    single->add_option("--C", single_c, "Walk threshold C")->required();
    single->add_option("--len", single_len, "Pattern length |w|")->required();
    single->add_option("--p", single_p, "Period bound")->required();
    single->add_option("--x", single_x, "Weight num/den in (0,1)")->required();

    // lower-bound
    auto* lower = app.add_subcommand("lower-bound", "Count square-free words compatible with a periodic partial word");
    std::string lower_preset, lower_mu;
    int lower_k = 0;
    SearchBudget lower_budget;
    lower->add_option("--preset", lower_preset, "quaternary or ternary");
    lower->add_option("--mu", lower_mu, "Partial word, e.g. '(0.1.2.3.)' or '00........'");
    lower->add_option("--k", lower_k, "Alphabet size");
    lower->add_option("--max-len", lower_budget.max_length, "Longest word explored")->check(CLI::PositiveNumber);
    lower->add_option("--max-nodes", lower_budget.max_nodes, "Search tree node budget")->check(CLI::PositiveNumber);

    // oracle-verify
    auto* oracle = app.add_subcommand("oracle-verify", "Compare compressed graphs with brute-force references");
    std::string oracle_graph;
    int oracle_k = 0;
    std::vector<std::size_t> oracle_p;
    std::size_t oracle_words = 50;
    std::uint64_t oracle_seed = 1;
    unsigned oracle_threads = 1;
    oracle->add_option("--graph", oracle_graph, "Check this graph file instead of a fresh build");
    oracle->add_option("--k", oracle_k, "Alphabet size");
    oracle->add_option("--p", oracle_p, "Period bounds")->expected(1, 16);
    oracle->add_option("--words", oracle_words, "Random (subset, partial word) rounds per instance");
    oracle->add_option("--seed", oracle_seed, "RNG seed");
    oracle->add_option("--threads", oracle_threads, "Worker threads for enumeration")->check(CLI::Range(1u, 256u));

    // prove
    auto* prove = app.add_subcommand("prove", "Build, prune, re-check and verify the certificate");
    CertSource prove_src;
    std::string prove_graph, prove_out;
    GraphFlags prove_flags;
    prove_src.add_options(*prove);
    prove->add_option("--graph", prove_graph, "Use this graph file instead of building one");
    prove->add_option("--out", prove_out, "Write the pruned subgraph here");
    prove_flags.add_options(*prove);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*build) return cmd_build_graph(build_k, build_p, build_flags, build_out, out);
        if (*prune) return cmd_prune(prune_graph, prune_src, prune_out, out);
        if (*check) return cmd_check_cert(check_src, out);
        if (*single) return cmd_check_singleton(single_c, single_len, single_p, single_x, out);
        if (*lower) return cmd_lower_bound(lower_preset, lower_mu, lower_k, lower_budget, out);
        if (*oracle) return cmd_oracle_verify(oracle_graph, oracle_k, oracle_p, oracle_words, oracle_seed, oracle_threads, out);
        if (*prove) return cmd_prove(prove_src, prove_graph, prove_flags, prove_out, out);
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << '\n';
        out << "status=budget_exceeded\n";
        return kExitNegative;
    } catch (const std::bad_alloc&) {
        err << "out of memory\n";
        out << "status=out_of_memory\n";
        return kExitNegative;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace sqavoid::cli
