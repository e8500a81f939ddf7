#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace calpkit;
namespace ref = calpkit::testing;

namespace {

// Single source at n1 feeding the sink directly.
ComputationDag single_source(int w) {
    return ComputationDag({{"s", w}, {"p", 1}}, {{"s", "p", {}, {}}}, {"s"}, "p", {"n1"});
}

int vertex(const CutInstance& inst, const std::string& name) {
    for (int v = 0; v < inst.num_vertices; ++v)
        if (inst.names[v] == name) return v;
    return -1;
}

}  // namespace

TEST(TwoCut, SingleSourceConstruction) {
    auto net = two_node_network();
    auto tc = build_2cut_instance(net, single_source(3));
    const auto& J = tc.inst;
    EXPECT_EQ(J.num_vertices, 5);
    int s_in = vertex(J, "s.in"), s_out = vertex(J, "s.out"), p = vertex(J, "p");
    ASSERT_GE(s_in, 0);
    ASSERT_GE(s_out, 0);
    ASSERT_GE(p, 0);
    auto has = [&](int a, int b, double w) {
        for (const auto& arc : J.arcs)
            if (arc.from == a && arc.to == b && arc.weight == w) return true;
        return false;
    };
    EXPECT_TRUE(has(J.j1, s_in, kInf));
    EXPECT_TRUE(has(J.j2, p, kInf));
    EXPECT_TRUE(has(s_in, s_out, 3.0));
    EXPECT_TRUE(has(s_out, p, kInf));
}

TEST(TwoCut, SourcesAtSinkLeaveJ1Isolated) {
    auto net = two_node_network();
    ComputationDag dag({{"s", 1}, {"p", 1}}, {{"s", "p", {}, {}}}, {"s"}, "p", {"n2"});
    auto tc = build_2cut_instance(net, dag);
    for (const auto& arc : tc.inst.arcs) EXPECT_NE(arc.from, tc.inst.j1);
}

TEST(TwoCut, VertexGadgetShape) {
    // u with two inputs and three outputs
    auto net = two_node_network();
    ComputationDag dag({{"a", 1}, {"b", 1}, {"u", 2}, {"x", 1}, {"y", 1}, {"z", 1}, {"p", 1}},
                       {{"a", "u", {}, {}}, {"b", "u", {}, {}}, {"u", "x", {}, {}}, {"u", "y", {}, {}},
                        {"u", "z", {}, {}}, {"x", "p", {}, {}}, {"y", "p", {}, {}}, {"z", "p", {}, {}}},
                       {"a", "b"}, "p", {"n1", "n2"});
    auto tc = build_2cut_instance(net, dag);
    int in = vertex(tc.inst, "u.in"), out = vertex(tc.inst, "u.out");
    int into = 0, outof = 0, middle = 0;
    for (const auto& arc : tc.inst.arcs) {
        if (arc.to == in) {
            ++into;
            EXPECT_EQ(arc.weight, kInf);
        }
        if (arc.from == out) {
            ++outof;
            EXPECT_EQ(arc.weight, kInf);
        }
        if (arc.from == in && arc.to == out) {
            ++middle;
            EXPECT_EQ(arc.weight, 2.0);
        }
    }
    EXPECT_EQ(into, 2);
    EXPECT_EQ(outof, 3);
    EXPECT_EQ(middle, 1);
}

TEST(Delta, BasicSets) {
    auto tc = build_2cut_instance(two_node_network(), single_source(2));
    const auto& J = tc.inst;
    EXPECT_EQ(delta(J, std::vector<char>(J.num_vertices, 1)), 0.0);
    EXPECT_EQ(delta(J, std::vector<char>(J.num_vertices, 0)), 0.0);
    std::vector<char> A(J.num_vertices, 0);
    A[J.j1] = 1;
    EXPECT_EQ(delta(J, A), kInf);
}

TEST(HValue, SingleSource) {
    auto tc = build_2cut_instance(two_node_network(), single_source(2));
    const auto& J = tc.inst;
    std::vector<char> A(J.num_vertices, 0);
    EXPECT_EQ(h_value(J, A), kInf);  // j1 -> s.in leaves {j1}
    A[vertex(J, "s.in")] = 1;
    EXPECT_EQ(h_value(J, A), 2.0);
}

TEST(HValue, MatchesBruteForceAndIsSubmodular) {
    Rng rng(7);
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto I = ref::two_node_instance(seed, 5);
        auto tc = build_2cut_instance(I.net, I.dag);
        const auto& J = tc.inst;
        auto random_set = [&] {
            std::vector<char> A(J.num_vertices, 0);
            for (int v = 0; v < J.num_vertices; ++v)
                if (v != J.j1 && v != J.j2) A[v] = rng.coin(0.5);
            return A;
        };
        for (int k = 0; k < 100; ++k) {
            auto Y = random_set(), Z = random_set();
            std::vector<char> U(J.num_vertices), N(J.num_vertices);
            for (int v = 0; v < J.num_vertices; ++v) U[v] = Y[v] || Z[v], N[v] = Y[v] && Z[v];
            double hy = h_value(J, Y), hz = h_value(J, Z), hu = h_value(J, U), hn = h_value(J, N);
            if (hy < kInf && hz < kInf) EXPECT_LE(hu + hn, hy + hz + 1e-9);
            if (k < 10) EXPECT_EQ(hy, ref::h_bruteforce(J, Y));
        }
    }
}

TEST(Solve2Cut, ZeroWeights) {
    auto net = two_node_network(1.0, 0.0);
    auto tc = build_2cut_instance(net, single_source(5), {0.0});
    EXPECT_EQ(solve_2cut(tc.inst).weight, 0.0);
}

TEST(Solve2Cut, SingleSourceEqualsWeight) {
    auto tc = build_2cut_instance(two_node_network(), single_source(4));
    auto sol = solve_2cut(tc.inst);
    EXPECT_EQ(sol.weight, 4.0);
    EXPECT_EQ(sol.weight, ref::twocut_bruteforce(tc.inst));
    auto emb = cut_to_embedding(two_node_network(), single_source(4), tc, sol);
    EXPECT_EQ(emb.cost, 4.0);
}

TEST(Solve2Cut, MatchesDoubleBruteForce) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto I = ref::two_node_instance(seed, 3 + static_cast<int>(seed % 3));
        auto tc = build_2cut_instance(I.net, I.dag);
        ASSERT_LE(tc.inst.num_vertices, 12);
        auto sol = solve_2cut(tc.inst);
        EXPECT_EQ(sol.weight, ref::twocut_bruteforce(tc.inst)) << I.name;
        EXPECT_EQ(cut_weight(tc.inst, sol), sol.weight);
    }
}

TEST(CutToEmbedding, MatchesPlacementBruteForce) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto I = ref::two_node_instance(seed, 4 + static_cast<int>(seed % 7));
        auto prices = I.net.weights();
        auto r = mincost_twonode(I.net, I.dag, prices);
        EXPECT_TRUE(validate_embedding(I.net, I.dag, r.emb).ok()) << I.name;
        EXPECT_EQ(r.cost, ref::twonode_bruteforce(I.net, I.dag, prices)) << I.name;
    }
}

TEST(CutToEmbedding, UnusedCopyIsPruned) {
    // u is forced into J3 by hand although both consumers sit at n1.
    auto net = NetworkGraph({"n1", "n2"}, {{"n1", "n2", 1, 1}}, {"n1", "n2"}, "n2");
    ComputationDag dag({{"s", 1}, {"u", 1}, {"v", 1}, {"p", 1}},
                       {{"s", "u", {}, {}}, {"u", "v", {}, {}}, {"v", "p", {}, {}}}, {"s"}, "p", {"n1"});
    auto tc = build_2cut_instance(net, dag);
    CutSolution sol;
    sol.side.assign(tc.inst.num_vertices, 2);
    sol.side[tc.inst.j1] = 1;
    sol.side[tc.in_vertex[0]] = 1;
    sol.side[tc.out_vertex[0]] = 0;
    sol.side[tc.in_vertex[1]] = 0;
    sol.side[tc.out_vertex[1]] = 0;
    sol.side[tc.in_vertex[2]] = 1;
    sol.side[tc.out_vertex[2]] = 0;
    auto emb = cut_to_embedding(net, dag, tc, sol);
    EXPECT_EQ(emb.sites[1].size(), 1u);
    EXPECT_TRUE(validate_embedding(net, dag, emb.emb).ok());
    EXPECT_LT(emb.cost, cut_weight(tc.inst, sol));
}

TEST(EmbeddingToCut, EverythingAtSink) {
    auto net = two_node_network();
    ComputationDag dag({{"s", 1}, {"u", 1}, {"p", 1}}, {{"s", "u", {}, {}}, {"u", "p", {}, {}}}, {"s"}, "p", {"n1"});
    auto tc = build_2cut_instance(net, dag);
    auto emb = assignment_to_rembedding(net, dag, {0, 1, 1}).general();
    auto cut = embedding_to_cut(net, dag, tc, emb);
    EXPECT_EQ(cut.side[tc.in_vertex[0]], 1);
    EXPECT_EQ(cut.side[tc.in_vertex[1]], 2);
    EXPECT_EQ(cut.side[tc.out_vertex[1]], 2);
    EXPECT_EQ(cut.weight, cost_C(net, dag, emb, {1}));
}

TEST(EmbeddingToCut, RoundTripDoesNotIncreaseWeight) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        auto I = ref::two_node_instance(seed, 6);
        auto tc = build_2cut_instance(I.net, I.dag);
        auto sol = solve_2cut(tc.inst);
        auto emb = cut_to_embedding(I.net, I.dag, tc, sol);
        auto back = embedding_to_cut(I.net, I.dag, tc, emb.emb);
        EXPECT_LE(back.weight, sol.weight + 1e-12);
        EXPECT_EQ(back.weight, emb.cost);
    }
}

TEST(EmbeddingToCut, DuplicatedVertexLandsInJ3) {
    auto net = two_node_network();
    ComputationDag dag({{"s", 1}, {"u", 1}, {"v", 1}, {"w", 1}, {"p", 1}},
                       {{"s", "u", {}, {}}, {"u", "v", {}, {}}, {"u", "w", {}, {}}, {"v", "p", {}, {}},
                        {"w", "p", {}, {}}},
                       {"s"}, "p", {"n1"});
    auto tc = build_2cut_instance(net, dag);
    Embedding e;
    e.paths = {{{0}, {0, 1}}, {{0}}, {{1}}, {{0, 1}}, {{1}}};
    ASSERT_TRUE(validate_embedding(net, dag, e).ok()) << validate_embedding(net, dag, e).str();
    auto cut = embedding_to_cut(net, dag, tc, e);
    EXPECT_EQ(cut.side[tc.in_vertex[1]], 0);
    EXPECT_EQ(cut.side[tc.out_vertex[1]], 0);
}

TEST(TwoNode, RejectsLargerNetworks) {
    auto I = io::read_instance(ref::fixture("fig2.json"));
    EXPECT_THROW(build_2cut_instance(I.net, I.dag), Error);
}
