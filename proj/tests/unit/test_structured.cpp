#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace calpkit;
namespace ref = calpkit::testing;
using calpkit::testing::fixture;

TEST(TreeDp, SingleEdge) {
    NetworkGraph net({"s", "m", "t"}, {{"s", "m", 1, 2}, {"m", "t", 1, 3}}, {"s"}, "t");
    ComputationDag dag({{"a", 4}, {"p", 1}}, {{"a", "p", {}, {}}}, {"a"}, "p");
    EXPECT_EQ(tree_dp_mincost_cc(net, dag, net.weights()).cost, 20.0);
}

TEST(TreeDp, MatchesOracleOnRandomTrees) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto I = ref::small_instance(seed, DagShape::Tree);
        ASSERT_TRUE(is_in_tree(I.dag));
        auto prices = I.net.weights();
        auto r = tree_dp_mincost_cc(I.net, I.dag, prices);
        EXPECT_EQ(r.cost, mincost_cc_exact(I.net, I.dag, prices).cost) << I.name;
        EXPECT_EQ(r.cost, ref::brute_mincost_cc(I.net, I.dag, prices)) << I.name;
        EXPECT_EQ(cost_CC(I.net, I.dag, r.emb, prices), r.cost);
        EXPECT_TRUE(validate_rembedding(I.net, I.dag, r.emb).ok());
    }
}

TEST(TreeDp, RejectsNonTrees) {
    auto I = io::read_instance(fixture("fig2.json"));
    EXPECT_THROW(tree_dp_mincost_cc(I.net, I.dag, I.net.weights()), Error);
}

TEST(LayeredDp, MatchesOracleOnRandomLayered) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto I = ref::small_instance(seed, DagShape::Layered);
        auto prices = I.net.weights();
        auto r = layered_dp_mincost_cc(I.net, I.dag, prices);
        EXPECT_EQ(r.cost, mincost_cc_exact(I.net, I.dag, prices).cost) << I.name;
        EXPECT_EQ(cost_CC(I.net, I.dag, r.emb, prices), r.cost);
        EXPECT_TRUE(validate_rembedding(I.net, I.dag, r.emb).ok());
    }
}

TEST(LayeredDp, ChainEqualsTreeDp) {
    NetworkGraph net({"a", "b", "c", "t"}, {{"a", "b", 1, 1}, {"b", "c", 1, 2}, {"c", "t", 1, 1}, {"a", "t", 1, 5}},
                     {"a"}, "t");
    ComputationDag dag({{"s", 2}, {"u", 3}, {"v", 1}, {"p", 1}},
                       {{"s", "u", {}, {}}, {"u", "v", {}, {}}, {"v", "p", {}, {}}}, {"s"}, "p");
    EXPECT_EQ(layered_dp_mincost_cc(net, dag, net.weights()).cost, tree_dp_mincost_cc(net, dag, net.weights()).cost);
}

TEST(LayeredDp, FftEqualsOracle) {
    auto I = io::read_instance(fixture("fft4.json"));
    auto p = I.net.weights();
    EXPECT_EQ(layered_dp_mincost_cc(I.net, I.dag, p).cost, mincost_cc_exact(I.net, I.dag, p).cost);
}

TEST(LayeredDp, NeighbourProductSum) {
    // f = x1 x2 + x2 x3 + x3 x4: products in one layer, sums along a chain of layers.
    std::vector<DagNodeSpec> nodes = {{"x1", 1}, {"x2", 1}, {"x3", 1}, {"x4", 1}, {"m12", 1}, {"m23", 1}, {"m34", 1},
                                      {"a", 1},  {"b", 1},  {"s", 1},  {"p", 1}};
    std::vector<DagEdgeSpec> edges = {{"x1", "m12", {}, {}}, {"x2", "m12", {}, {}}, {"x2", "m23", {}, {}},
                                      {"x3", "m23", {}, {}}, {"x3", "m34", {}, {}}, {"x4", "m34", {}, {}},
                                      {"m12", "a", {}, {}},  {"m23", "a", {}, {}},  {"m34", "b", {}, {}},
                                      {"a", "s", {}, {}},    {"b", "s", {}, {}},    {"s", "p", {}, {}}};
    ComputationDag g(nodes, edges, {"x1", "x2", "x3", "x4"}, "p", {"u0", "u1", "u2", "u0"});
    NetworkGraph net({"u0", "u1", "u2", "t"},
                     {{"u0", "u1", 1, 1}, {"u1", "u2", 1, 2}, {"u2", "t", 1, 1}, {"u0", "t", 1, 2}}, {"u0", "u1", "u2"},
                     "t");
    ASSERT_TRUE(layer_dag(g).layered);
    EXPECT_EQ(layered_dp_mincost_cc(net, g, net.weights()).cost, mincost_cc_exact(net, g, net.weights()).cost);
}

TEST(LayeredDp, WidthBudgetAndShape) {
    auto I = io::read_instance(fixture("fft4.json"));
    try {
        layered_dp_mincost_cc(I.net, I.dag, I.net.weights(), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Budget);
    }
    auto J = io::read_instance(fixture("fig2.json"));
    try {
        layered_dp_mincost_cc(J.net, J.dag, J.net.weights());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
}

TEST(SpanningTreeApprox, TreeDagIsExact) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto I = ref::small_instance(seed, DagShape::Tree);
        auto p = I.net.weights();
        auto r = spanning_tree_approx_mincost_cc(I.net, I.dag, p);
        EXPECT_EQ(r.F, 0);
        EXPECT_EQ(r.cost, tree_dp_mincost_cc(I.net, I.dag, p).cost);
        EXPECT_EQ(r.bound, r.cost);
    }
}

TEST(SpanningTreeApprox, FftWithinBound) {
    auto I = io::read_instance(fixture("fft4.json"));
    auto p = I.net.weights();
    auto r = spanning_tree_approx_mincost_cc(I.net, I.dag, p, I.tree);
    double opt = mincost_cc_exact(I.net, I.dag, p).cost;
    EXPECT_LE(r.cost, (1 + r.F) * opt);
    EXPECT_LE(r.tree_cost, opt);
    EXPECT_LE(r.cost, r.bound);
}

TEST(SpanningTreeApprox, FourCycle) {
    NetworkGraph net({"a", "b", "t"}, {{"a", "b", 1, 1}, {"b", "t", 1, 1}, {"a", "t", 1, 3}}, {"a"}, "t");
    ComputationDag dag({{"s", 1}, {"u", 1}, {"v", 1}, {"p", 1}},
                       {{"s", "u", {}, {}}, {"s", "v", {}, {}}, {"u", "p", {}, {}}, {"v", "p", {}, {}}}, {"s"}, "p");
    auto r = spanning_tree_approx_mincost_cc(net, dag, net.weights());
    EXPECT_EQ(r.F, 1);
    EXPECT_LE(r.cost, 2 * mincost_cc_exact(net, dag, net.weights()).cost);
}

TEST(SpanningTreeApprox, RandomWithinBound) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto I = ref::small_instance(seed, DagShape::General, 5, 7);
        auto p = I.net.weights();
        auto r = spanning_tree_approx_mincost_cc(I.net, I.dag, p);
        double opt = mincost_cc_exact(I.net, I.dag, p).cost;
        EXPECT_LE(r.tree_cost, opt);
        EXPECT_LE(r.cost, r.weighted_bound + 1e-9);
        EXPECT_TRUE(validate_rembedding(I.net, I.dag, r.emb).ok());
    }
}

TEST(LayeredRatio, MinOfWidthAndDegree) {
    auto I = io::read_instance(fixture("fft4.json"));
    EXPECT_EQ(layered_rcalp_ratio(I.dag), 2);
}
