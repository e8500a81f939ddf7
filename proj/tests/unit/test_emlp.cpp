#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace calpkit;
namespace ref = calpkit::testing;
using calpkit::testing::fixture;

namespace {

DistanceMatrix line3() {
    NetworkGraph net({"0", "1", "2"}, {{"0", "1", 1, 1}, {"1", "2", 1, 1}}, {"0"}, "2");
    return DistanceMatrix(net, {1, 1});
}

}  // namespace

TEST(EarthMover, Basics) {
    auto d = line3();
    EXPECT_EQ(em_distance({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}, d).cost, 0.0);
    EXPECT_EQ(em_distance({1, 0, 0}, {0, 0, 1}, d).cost, 2.0);
    EXPECT_NEAR(em_distance({0.5, 0.5, 0}, {0, 0.5, 0.5}, d).cost, 1.0, 1e-12);
}

TEST(EarthMover, TransportPlanHasTheMarginals) {
    auto d = line3();
    std::vector<double> a{0.1, 0.6, 0.3}, b{0.5, 0.2, 0.3};
    auto t = em_distance(a, b, d);
    for (int u = 0; u < 3; ++u) {
        double row = 0, col = 0;
        for (int v = 0; v < 3; ++v) row += t.flow[u * 3 + v], col += t.flow[v * 3 + u];
        EXPECT_NEAR(row, a[u], 1e-12);
        EXPECT_NEAR(col, b[u], 1e-12);
    }
}

TEST(EarthMoverLp, IntegralOnTrees) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto I = ref::small_instance(seed, DagShape::Tree);
        auto p = I.net.weights();
        auto lp = solve_earthmover_lp(I.net, I.dag, p);
        EXPECT_NEAR(lp.lp_value, tree_dp_mincost_cc(I.net, I.dag, p).cost, 1e-7) << I.name;
        EXPECT_LE(placement_residual(I.net, I.dag, lp.placement), 1e-7);
    }
}

TEST(EarthMoverLp, ZeroPrices) {
    auto I = io::read_instance(fixture("fig2.json"));
    auto lp = solve_earthmover_lp(I.net, I.dag, std::vector<double>(I.net.m(), 0.0));
    EXPECT_NEAR(lp.lp_value, 0.0, 1e-12);
}

TEST(EarthMoverLp, LowerBoundsTheOptimum) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto I = ref::small_instance(seed, DagShape::General, 4, 5);
        auto p = I.net.weights();
        auto lp = solve_earthmover_lp(I.net, I.dag, p);
        EXPECT_LE(lp.lp_value, mincost_cc_exact(I.net, I.dag, p).cost + 1e-7) << I.name;
        EXPECT_LE(placement_residual(I.net, I.dag, lp.placement), 1e-7);
    }
}

TEST(Rounding, IntegralPlacementIsKept) {
    auto I = ref::small_instance(3, DagShape::General);
    auto p = I.net.weights();
    auto opt = mincost_cc_exact(I.net, I.dag, p);
    FractionalPlacement fp;
    fp.n = I.net.n();
    fp.x.assign(I.dag.size(), std::vector<double>(fp.n, 0.0));
    for (int v = 0; v < I.dag.size(); ++v) fp.x[v][opt.emb.assignment[v]] = 1.0;
    DistanceMatrix d(I.net, p);
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        EXPECT_EQ(ckr_round(I.net, I.dag, fp, d, seed).assignment, opt.emb.assignment);
}

TEST(Rounding, ValidAndAboveTheRelaxation) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto I = ref::small_instance(seed, DagShape::General, 4, 6);
        auto p = I.net.weights();
        auto lp = solve_earthmover_lp(I.net, I.dag, p);
        DistanceMatrix d(I.net, p);
        for (std::uint64_t s = 1; s <= 20; ++s) {
            auto r = ckr_round(I.net, I.dag, lp.placement, d, s);
            EXPECT_TRUE(validate_rembedding(I.net, I.dag, r.emb).ok());
            EXPECT_GE(r.cost, lp.lp_value - 1e-7);
            EXPECT_GE(r.delta, 1.0);
            EXPECT_LT(r.delta, 2.0);
        }
    }
}

TEST(Rounding, FixedSeedIsReproducible) {
    auto I = io::read_instance(fixture("fft4.json"));
    auto p = I.net.weights();
    auto lp = solve_earthmover_lp(I.net, I.dag, p);
    DistanceMatrix d(I.net, p);
    auto a = ckr_round(I.net, I.dag, lp.placement, d, 42);
    auto b = ckr_round(I.net, I.dag, lp.placement, d, 42);
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_EQ(a.permutation, b.permutation);
    EXPECT_EQ(a.delta, b.delta);
    auto golden = io::read_json_file(fixture("golden/ckr_seed42.json"));
    EXPECT_EQ(io::to_json(I.net, I.dag, a.emb)["assignment"], golden["assignment"]);
    EXPECT_EQ(a.delta, golden["delta"].get<double>());
}

TEST(Rounding, MeanCostWithinLogFactor) {
    for (const char* name : {"fig1.json", "fig2.json", "fft4.json"}) {
        auto I = io::read_instance(fixture(name));
        auto p = I.net.weights();
        auto lp = solve_earthmover_lp(I.net, I.dag, p);
        DistanceMatrix d(I.net, p);
        double opt = mincost_cc_exact(I.net, I.dag, p).cost, sum = 0;
        for (std::uint64_t s = 1; s <= 200; ++s) sum += ckr_round(I.net, I.dag, lp.placement, d, s).cost;
        EXPECT_LE(sum / 200, 4 * std::log(std::max(I.net.n(), 2)) * opt) << name;
    }
}
