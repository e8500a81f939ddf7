#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace calpkit;
namespace ref = calpkit::testing;
using calpkit::testing::fixture;

namespace {

struct Fixture {
    Instance I;
    std::vector<RateColumn> cols;
};

Fixture load(const std::string& name) {
    Fixture f;
    f.I = io::read_instance(fixture(name + ".json"));
    f.cols = io::columns_from_json(f.I.net, f.I.dag, io::read_json_file(fixture(name + "_cols.json")));
    return f;
}

int edge(const NetworkGraph& net, const char* a, const char* b) { return net.edge_between(net.index(a), net.index(b)); }

}  // namespace

TEST(Embedding, FixtureEmbeddingsAreValid) {
    for (const char* name : {"fig1", "fig2"}) {
        auto f = load(name);
        for (const auto& c : f.cols) {
            auto rep = validate_embedding(f.I.net, f.I.dag, c.emb);
            EXPECT_TRUE(rep.ok()) << name << " " << c.name << ": " << rep.str();
        }
    }
}

TEST(Embedding, RestrictedOnlyWhenSinglePath) {
    auto f = load("fig2");
    EXPECT_TRUE(validate_rembedding(f.I.net, f.I.dag, f.cols[0].emb).ok());
    auto rep = validate_rembedding(f.I.net, f.I.dag, f.cols[1].emb);
    EXPECT_TRUE(rep.has("single_path"));
    EXPECT_THROW(to_rembedding(f.I.net, f.I.dag, f.cols[1].emb), Error);
}

TEST(Embedding, TwoStartsSharingAnEndIsInvalid) {
    // a, b -> c: gamma mapped to {ac, bc} merges two copies at c.
    NetworkGraph net({"a", "b", "c"}, {{"a", "c", 1, 1}, {"b", "c", 1, 1}, {"a", "b", 1, 1}}, {"a", "b"}, "c");
    ComputationDag dag({{"s", 1}, {"u", 1}, {"v", 1}, {"p", 1}},
                       {{"s", "u", {}, {}}, {"u", "v", {}, {}}, {"v", "p", {}, {}}}, {"s"}, "p", {"a"});
    auto a = net.index("a"), b = net.index("b"), c = net.index("c");
    Embedding e;
    e.paths = {{{a}, {a, b}}, {{a, c}, {b, c}}, {{c}}};
    auto rep = validate_embedding(net, dag, e);
    EXPECT_FALSE(rep.ok());
    EXPECT_TRUE(rep.has("distinct_ends"));
}

TEST(Embedding, PathsOfOneEdgeWithDistinctStartsMustBeDisjoint) {
    NetworkGraph net({"a", "b", "c", "d"}, {{"a", "c", 1, 1}, {"b", "c", 1, 1}, {"c", "d", 1, 1}, {"a", "b", 1, 1}},
                     {"a"}, "d");
    ComputationDag dag({{"s", 1}, {"u", 1}, {"v", 1}, {"p", 1}},
                       {{"s", "u", {}, {}}, {"u", "v", {}, {}}, {"v", "p", {}, {}}}, {"s"}, "p");
    int a = 0, b = 1, c = 2, d = 3;
    Embedding e;
    e.paths = {{{a}, {a, b}}, {{a, c}, {b, c, d}}, {{c, d}, {d}}};
    EXPECT_TRUE(validate_embedding(net, dag, e).has("disjoint_paths"));
}

TEST(Embedding, SingleNodeNetworkCollapses) {
    NetworkGraph net({"t"}, {}, {"t"}, "t");
    ComputationDag dag({{"s", 1}, {"u", 2}, {"p", 1}}, {{"s", "u", {}, {}}, {"u", "p", {}, {}}}, {"s"}, "p");
    auto r = assignment_to_rembedding(net, dag, {0, 0, 0});
    EXPECT_TRUE(validate_rembedding(net, dag, r).ok());
    EXPECT_EQ(cost_C(net, dag, r, {}), 0.0);
    EXPECT_EQ(r.paths[0], Path{0});
}

TEST(Usage, SharedEdgeCountedPerFunction) {
    auto f = load("fig2");
    const auto& net = f.I.net;
    auto u1 = edge_usage(net, f.I.dag, f.cols[0].emb);
    EXPECT_EQ(u1.total[edge(net, "x", "z")], 2.0);
    auto u2 = edge_usage(net, f.I.dag, f.cols[1].emb);
    for (int e = 0; e < net.m(); ++e) EXPECT_TRUE(u2.total[e] == 0.0 || u2.total[e] == 1.0) << e;
    int used = 0;
    for (double t : u2.total) used += t > 0;
    EXPECT_EQ(used, net.m());
    EXPECT_EQ(u1.total[edge(net, "s2", "y")], 0.0);
}

TEST(Cost, FixtureCostModels) {
    auto f = load("fig1");
    auto prices = std::vector<double>(f.I.net.m(), 1.0);
    const auto& impl1 = f.cols[0].emb;
    EXPECT_EQ(cost_C(f.I.net, f.I.dag, impl1, prices), 6.0);
    auto r = to_rembedding(f.I.net, f.I.dag, impl1);
    EXPECT_EQ(cost_CC(f.I.net, f.I.dag, r, prices), 7.0);
    EXPECT_EQ(cost_C(f.I.net, f.I.dag, impl1, std::vector<double>(f.I.net.m(), 0.0)), 0.0);
}

TEST(Cost, WeightTimesPathLength) {
    NetworkGraph net({"a", "b", "c"}, {{"a", "b", 1, 1}, {"b", "c", 1, 1}}, {"a"}, "c");
    ComputationDag dag({{"s", 3}, {"p", 1}}, {{"s", "p", {}, {}}}, {"s"}, "p");
    Embedding e;
    e.paths = {{{0, 1, 2}}};
    EXPECT_EQ(cost_C(net, dag, e, {1, 1}), 6.0);
}

TEST(Cost, TwoOutEdgesOverOneNetworkEdge) {
    NetworkGraph net({"a", "b"}, {{"a", "b", 1, 1}}, {"a"}, "b");
    ComputationDag dag({{"s", 1}, {"u", 1}, {"v", 1}, {"p", 1}},
                       {{"s", "u", {}, {}}, {"s", "v", {}, {}}, {"u", "p", {}, {}}, {"v", "p", {}, {}}}, {"s"}, "p");
    auto r = assignment_to_rembedding(net, dag, {0, 1, 1, 1});
    EXPECT_EQ(cost_C(net, dag, r, {1}), 1.0);
    EXPECT_EQ(cost_CC(net, dag, r, {1}), 2.0);
}

TEST(Cost, NoSharingMeansModelsAgree) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto I = ref::small_instance(seed, DagShape::Tree);
        auto r = mincost_cc_exact(I.net, I.dag, I.net.weights());
        EXPECT_EQ(cost_C(I.net, I.dag, r.emb, I.net.weights()), cost_CC(I.net, I.dag, r.emb, I.net.weights()));
    }
}

TEST(Assignment, FixturePlacementReproducesListing) {
    auto f = load("fig2");
    const auto& net = f.I.net;
    const auto& dag = f.I.dag;
    std::vector<int> a(dag.size());
    const char* site[] = {"s1", "s2", "s3", "s4", "x", "x", "z", "z", "t"};
    for (int v = 0; v < dag.size(); ++v) a[v] = net.index(site[v]);
    auto r = assignment_to_rembedding(net, dag, a, DistanceMatrix(net, std::vector<double>(net.m(), 1.0)));
    EXPECT_TRUE(r.general() == f.cols[0].emb);
}

TEST(Assignment, AdjacentVerticesOnOneNodeGetZeroLengthPaths) {
    auto I = io::read_instance(fixture("fig2.json"));
    std::vector<int> a(I.dag.size(), I.net.index("x"));
    for (int s : I.dag.sources()) a[s] = I.net.sources()[I.dag.source_position(s)];
    a[I.dag.sink()] = I.net.sink();
    auto r = assignment_to_rembedding(I.net, I.dag, a);
    EXPECT_EQ(r.paths[I.dag.edge_index("g5")], Path{I.net.index("x")});
    EXPECT_TRUE(validate_rembedding(I.net, I.dag, r).ok());
}

TEST(Embedding, EnumeratedRembeddingsAreValid) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto I = ref::small_instance(seed, DagShape::General, 3, 5);
        long count = 0;
        ref::for_each_rembedding(I.net, I.dag, 2000, [&](const REmbedding& r) {
            ++count;
            EXPECT_TRUE(validate_rembedding(I.net, I.dag, r).ok());
            EXPECT_TRUE(validate_embedding(I.net, I.dag, r.general()).ok());
        });
        EXPECT_GT(count, 0);
    }
}

TEST(Sites, ComputedTwiceInSecondEmbedding) {
    auto f = load("fig2");
    auto sites = computation_sites(f.I.net, f.I.dag, f.cols[1].emb);
    EXPECT_EQ(sites[f.I.dag.index("w5")].size(), 2u);
}
