#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

using namespace calpkit;
namespace ref = calpkit::testing;
using calpkit::testing::fixture;

TEST(Numbers, InfinityAsString) {
    EXPECT_EQ(io::number(kInf), "inf");
    EXPECT_EQ(io::number(2.5), 2.5);
    EXPECT_EQ(io::to_number("inf"), kInf);
    EXPECT_EQ(io::to_number(3), 3.0);
    EXPECT_THROW(io::to_number("seven"), Error);
}

TEST(InstanceJson, RoundTrip) {
    for (const char* name : {"fig1.json", "fig2.json", "fft4.json"}) {
        auto I = io::read_instance(fixture(name));
        auto j = io::to_json(I);
        auto back = io::instance_from_json(j);
        EXPECT_EQ(io::to_json(back), j) << name;
        EXPECT_EQ(back.net.ids(), I.net.ids());
        EXPECT_EQ(back.dag.num_edges(), I.dag.num_edges());
        EXPECT_EQ(back.tree, I.tree);
    }
}

TEST(InstanceJson, SpanningTreeField) {
    auto I = io::read_instance(fixture("fft4.json"));
    ASSERT_TRUE(I.tree.has_value());
    EXPECT_EQ(I.tree->size(), 13u);
    auto j = io::read_json_file(fixture("fft4.json"));
    j["spanning_tree"].push_back("no-such-edge");
    EXPECT_THROW(io::instance_from_json(j), Error);
}

TEST(InstanceJson, Rejections) {
    EXPECT_THROW(io::instance_from_json(io::json::parse(R"({"network": {}})")), Error);
    EXPECT_THROW(io::read_instance(fixture("missing.json")), Error);
    auto j = io::read_json_file(fixture("fig2.json"));
    j["network"]["edges"][0]["capacity"] = -1;
    EXPECT_THROW(io::instance_from_json(j), Error);
}

TEST(InstanceJson, CyclicDagLoadsButFailsValidation) {
    auto I = io::read_instance(fixture("bad.json"));
    auto rep = validate_computation_dag(I.dag);
    EXPECT_TRUE(rep.has("acyclicity"));
}

TEST(EmbeddingJson, RoundTrip) {
    auto I = io::read_instance(fixture("fig2.json"));
    auto cols = io::columns_from_json(I.net, I.dag, io::read_json_file(fixture("fig2_cols.json")));
    ASSERT_EQ(cols.size(), 2u);
    for (const auto& c : cols) {
        auto j = io::to_json(I.net, I.dag, c.emb);
        EXPECT_EQ(io::embedding_from_json(I.net, I.dag, j), c.emb);
    }
    auto j = io::columns_to_json(I.net, I.dag, cols);
    auto back = io::columns_from_json(I.net, I.dag, j);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].name, "E1");
    EXPECT_EQ(back[1].emb, cols[1].emb);
}

TEST(EmbeddingJson, UnknownIdsAreRejected) {
    auto I = io::read_instance(fixture("fig2.json"));
    EXPECT_THROW(io::embedding_from_json(I.net, I.dag, io::json::parse(R"({"nope": [["x"]]})")), Error);
    EXPECT_THROW(io::embedding_from_json(I.net, I.dag, io::json::parse(R"({"g1": [["nowhere"]]})")), Error);
}

TEST(RateSolutionJson, RoundTrip) {
    auto I = io::read_instance(fixture("fig2.json"));
    auto cols = io::columns_from_json(I.net, I.dag, io::read_json_file(fixture("fig2_cols.json")));
    auto sol = solve_packing_lp(I.net, I.dag, cols);
    auto j = io::to_json(I.net, I.dag, sol);
    auto back = io::rate_solution_from_json(I.net, I.dag, j);
    EXPECT_DOUBLE_EQ(back.R, sol.R);
    ASSERT_EQ(back.columns.size(), sol.columns.size());
    for (size_t i = 0; i < sol.columns.size(); ++i) EXPECT_DOUBLE_EQ(back.columns[i].flow, sol.columns[i].flow);
}

TEST(Trace, WriteThenRead) {
    auto I = io::read_instance(fixture("fig2.json"));
    auto cols = io::columns_from_json(I.net, I.dag, io::read_json_file(fixture("fig2_cols.json")));
    auto tr = build_schedule(I.net, I.dag, solve_packing_lp(I.net, I.dag, cols));
    std::stringstream ss;
    io::write_trace(ss, I.net, I.dag, tr);
    auto back = io::read_trace(ss, I.net, I.dag);
    EXPECT_EQ(back.K, tr.K);
    ASSERT_EQ(back.events.size(), tr.events.size());
    for (size_t i = 0; i < tr.events.size(); ++i) {
        EXPECT_EQ(back.events[i].kind, tr.events[i].kind);
        EXPECT_EQ(back.events[i].theta, tr.events[i].theta);
        EXPECT_EQ(back.events[i].k, tr.events[i].k);
    }
}

TEST(Trace, MalformedLines) {
    auto I = io::read_instance(fixture("fig2.json"));
    std::stringstream bad(R"({"type":"compute","node":"x","theta":"nope","k":1})");
    EXPECT_THROW(io::read_trace(bad, I.net, I.dag), Error);
    std::stringstream junk("not json\n");
    EXPECT_THROW(io::read_trace(junk, I.net, I.dag), Error);
}

TEST(GraphText, Formats) {
    auto a = io::graph_from_text("# c\n1 2\n2 3\n\n");
    EXPECT_EQ(a.vertices.size(), 3u);
    EXPECT_EQ(a.edges.size(), 2u);
    auto b = io::graph_from_text(R"({"edges": [["1", "2"], ["2", "3"]]})");
    EXPECT_EQ(b.edges, a.edges);
    EXPECT_THROW(io::graph_from_text("1 2 3\n"), Error);
}
