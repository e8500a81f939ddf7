#include <benchmark/benchmark.h>

#include <string>

#include "calpkit/calpkit.hpp"

using namespace calpkit;

namespace {

Instance fixture(const char* name) { return io::read_instance(std::string(CALPKIT_FIXTURE_DIR) + "/" + name); }

Instance layered(int vertices) {
    GenOptions g;
    g.nodes = 5;
    g.extra_edges = 2;
    g.dag_vertices = vertices;
    g.shape = DagShape::Layered;
    g.layer_width = 2;
    return random_instance(99, g);
}

void BM_MinCostCC(benchmark::State& st) {
    auto I = fixture("fig1.json");
    auto p = I.net.weights();
    for (auto _ : st) benchmark::DoNotOptimize(mincost_cc_exact(I.net, I.dag, p).cost);
}
BENCHMARK(BM_MinCostCC);

void BM_MinCostC(benchmark::State& st) {
    auto I = fixture("fig1.json");
    auto p = I.net.weights();
    for (auto _ : st) benchmark::DoNotOptimize(mincost_c_exact(I.net, I.dag, p).cost);
}
BENCHMARK(BM_MinCostC);

void BM_LayeredDp(benchmark::State& st) {
    auto I = layered(static_cast<int>(st.range(0)));
    auto p = I.net.weights();
    for (auto _ : st) benchmark::DoNotOptimize(layered_dp_mincost_cc(I.net, I.dag, p).cost);
}
BENCHMARK(BM_LayeredDp)->Arg(8)->Arg(12)->Arg(16);

void BM_SpanningTree(benchmark::State& st) {
    auto I = fixture("fft4.json");
    auto p = I.net.weights();
    for (auto _ : st) benchmark::DoNotOptimize(spanning_tree_approx_mincost_cc(I.net, I.dag, p, I.tree).cost);
}
BENCHMARK(BM_SpanningTree);

void BM_EarthMoverLp(benchmark::State& st) {
    auto I = fixture("fig1.json");
    auto p = I.net.weights();
    for (auto _ : st) benchmark::DoNotOptimize(solve_earthmover_lp(I.net, I.dag, p).lp_value);
}
BENCHMARK(BM_EarthMoverLp);

void BM_ColumnGeneration(benchmark::State& st) {
    auto I = fixture("fig1.json");
    PricingOptions opt;
    for (auto _ : st) benchmark::DoNotOptimize(solve_rcalp_colgen(I.net, I.dag, opt).R);
}
BENCHMARK(BM_ColumnGeneration)->Unit(benchmark::kMillisecond);

void BM_Mwu(benchmark::State& st) {
    auto I = fixture("fig2.json");
    PricingOptions opt;
    double eps = 1.0 / static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(solve_rcalp_mwu(I.net, I.dag, eps, opt).R);
}
BENCHMARK(BM_Mwu)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_TwoCut(benchmark::State& st) {
    Rng rng(5);
    GenOptions g;
    g.dag_vertices = static_cast<int>(st.range(0));
    g.sources = 3;
    auto net = two_node_network(2.0, 1.0);
    auto dag = random_dag(rng, net, g);
    auto p = net.weights();
    for (auto _ : st) benchmark::DoNotOptimize(mincost_twonode(net, dag, p).cost);
}
BENCHMARK(BM_TwoCut)->Arg(6)->Arg(8)->Arg(10);

void BM_Schedule(benchmark::State& st) {
    auto I = fixture("fig1.json");
    PricingOptions opt;
    auto sol = solve_rcalp_colgen(I.net, I.dag, opt);
    for (auto _ : st) {
        auto tr = build_schedule(I.net, I.dag, sol);
        benchmark::DoNotOptimize(validate_schedule(I.net, I.dag, tr).lambda);
    }
}
BENCHMARK(BM_Schedule)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
