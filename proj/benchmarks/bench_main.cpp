#include <benchmark/benchmark.h>

#include <fstream>
#include <string>

#include "sqavoid/certificate.hpp"
#include "sqavoid/pattern_syntax.hpp"
#include "sqavoid/prune.hpp"
#include "sqavoid/rauzy.hpp"
#include "sqavoid/search.hpp"

using namespace sqavoid;

namespace {

Certificate load(const std::string& rel) {
    std::ifstream in(std::string(SQAVOID_BENCH_CONFIG_DIR) + "/" + rel);
    return parse_certificate(in);
}

PatternSet quaternary_patterns(std::size_t p) {
    const Alphabet four(4);
    PatternSet ps;
    ps.period_bound = p;
    ps.patterns = expand_patterns("{. a .}", four);
    for (auto& w : expand_patterns("{. . a .}", four)) ps.patterns.push_back(w);
    ps.patterns.push_back(PartialWord::holes(1));
    normalize_patterns(ps.patterns);
    ps.thresholds = {{1, 2}, {3, 2}, {4, 6}};
    return ps;
}

} // namespace

static void BM_PsiGraph(benchmark::State& state) {
    const Alphabet alphabet(static_cast<int>(state.range(0)));
    const auto p = static_cast<std::size_t>(state.range(1));
    std::size_t vertices = 0;
    for (auto _ : state) {
        LabeledGraph g = build_psi_graph(alphabet, p);
        vertices = g.vertex_count();
        benchmark::DoNotOptimize(vertices);
    }
    state.counters["V"] = static_cast<double>(vertices);
}
BENCHMARK(BM_PsiGraph)->Args({3, 10})->Args({3, 14})->Args({4, 6})->Args({4, 8})->Unit(benchmark::kMillisecond);

static void BM_FullRauzy(benchmark::State& state) {
    const Alphabet alphabet(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_full_rauzy(alphabet, static_cast<std::size_t>(state.range(1))));
}
BENCHMARK(BM_FullRauzy)->Args({3, 8})->Args({4, 6})->Unit(benchmark::kMillisecond);

static void BM_WalkCounts(benchmark::State& state) {
    const LabeledGraph g = build_psi_graph(Alphabet(4), 8);
    const VertexMask all = full_mask(g);
    const PartialWord w = PartialWord::holes(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(final_walk_counts(g, all, w));
    state.counters["V"] = static_cast<double>(g.vertex_count());
}
BENCHMARK(BM_WalkCounts)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Prune(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const LabeledGraph g = build_psi_graph(Alphabet(4), p);
    const PatternSet ps = quaternary_patterns(p);
    std::size_t kept = 0;
    for (auto _ : state) {
        kept = prune_fixed_point(g, ps).size();
        benchmark::DoNotOptimize(kept);
    }
    state.counters["X"] = static_cast<double>(kept);
}
BENCHMARK(BM_Prune)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_CheckCertificate(benchmark::State& state, const char* file) {
    const Certificate cert = load(file);
    for (auto _ : state) benchmark::DoNotOptimize(check_certificate(cert).pass);
}
BENCHMARK_CAPTURE(BM_CheckCertificate, six, "paper/six.cert");
BENCHMARK_CAPTURE(BM_CheckCertificate, quaternary, "paper/quaternary.cert");
BENCHMARK_CAPTURE(BM_CheckCertificate, ternary, "paper/ternary.cert")->Unit(benchmark::kMillisecond);

static void BM_Search(benchmark::State& state, const char* mu, int k) {
    const Alphabet alphabet(k);
    const PeriodicPartialWord word = parse_periodic(mu, alphabet);
    for (auto _ : state) benchmark::DoNotOptimize(count_compatible_square_free(word, alphabet).count);
}
BENCHMARK_CAPTURE(BM_Search, quaternary, "(0.1.2.3.)", 4);
BENCHMARK_CAPTURE(BM_Search, ternary, "({0.^5}{1.^5}{2.^5})", 3);
BENCHMARK_MAIN();
